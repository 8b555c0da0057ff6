use std::cmp::Ordering;

use proptest::prelude::*;
use symcont::exactnum::{compare, midpoint, qx_arith, QuadExt, QxOp, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..=10_000, 1i64..=10_000).prop_map(|(n, d)| Rational::new(n, d))
}

fn quad() -> impl Strategy<Value = QuadExt> {
    (rational(), rational()).prop_map(|(a, b)| QuadExt::new(a, b))
}

// a + b*sqrt2 in f64, good enough when the two sides are far apart
fn approx(x: &QuadExt) -> f64 {
    let (a, b) = (x.rat.to_f64(), x.irr.to_f64());
    a + b * std::f64::consts::SQRT_2
}

proptest! {
    #[test]
    fn text_round_trip(x in quad()) {
        let back: QuadExt = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn division_undoes_multiplication(x in quad(), y in quad()) {
        prop_assume!(!y.is_zero());
        let p = qx_arith(QxOp::Mul, &x, &y).unwrap();
        prop_assert_eq!(qx_arith(QxOp::Div, &p, &y).unwrap(), x);
    }

    #[test]
    fn negation_is_additive_inverse(x in quad()) {
        let n = qx_arith(QxOp::Neg, &x, &QuadExt::zero()).unwrap();
        prop_assert!(qx_arith(QxOp::Add, &x, &n).unwrap().is_zero());
    }

    #[test]
    fn order_agrees_with_floats_when_separated(x in quad(), y in quad()) {
        let (fx, fy) = (approx(&x), approx(&y));
        prop_assume!((fx - fy).abs() > 1e-6);
        let want = if fx < fy { Ordering::Less } else { Ordering::Greater };
        prop_assert_eq!(compare(&x, &y), want);
    }

    #[test]
    fn midpoint_is_equidistant(x in quad(), y in quad()) {
        let m = midpoint(&x, &y);
        prop_assert_eq!(&m - &x, &y - &m);
    }

    #[test]
    fn midpoint_with_root_two(q in rational()) {
        let m = midpoint(&QuadExt::from_rational(q), &QuadExt::new(Rational::zero(), Rational::one()));
        prop_assert_eq!(m.irr, Rational::new(1, 2));
    }
}

#[test]
fn worked_values() {
    let root2: QuadExt = "sqrt2".parse().unwrap();
    assert_eq!(qx_arith(QxOp::Mul, &root2, &root2).unwrap(), QuadExt::int(2));
    let x: QuadExt = "1 + 1*sqrt2".parse().unwrap();
    let y: QuadExt = "-1 + 1*sqrt2".parse().unwrap();
    assert_eq!(qx_arith(QxOp::Mul, &x, &y).unwrap(), QuadExt::int(1));
    assert_eq!(qx_arith(QxOp::Neg, &x, &y).unwrap(), "-1 - 1*sqrt2".parse().unwrap());
    assert!(qx_arith(QxOp::Div, &x, &QuadExt::zero()).is_err());
    assert_eq!(compare(&root2, &QuadExt::frac(99, 70)), Ordering::Less);
    assert_eq!(compare(&root2, &QuadExt::frac(140, 99)), Ordering::Greater);
}
