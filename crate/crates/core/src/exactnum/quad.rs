use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::Error;

/// Element `rat + irr*sqrt(2)` of the field Q(sqrt 2).
///
/// Ordering is exact: the sign of `a + b*sqrt2` is decided by comparing
/// `a^2` with `2*b^2` when the two parts disagree in sign.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    pub rat: Rational,
    pub irr: Rational,
}

impl QuadExt {
    pub fn new(rat: Rational, irr: Rational) -> Self {
        QuadExt { rat, irr }
    }

    pub fn from_rational(rat: Rational) -> Self {
        QuadExt { rat, irr: Rational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num, den))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn sqrt2() -> Self {
        QuadExt { rat: Rational::zero(), irr: Rational::one() }
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn signum(&self) -> i32 {
        let sa = self.rat.signum();
        let sb = self.irr.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // parts disagree: compare a^2 with 2 b^2
        let a2 = &self.rat * &self.rat;
        let b2 = &self.irr * &self.irr;
        let two_b2 = &b2 + &b2;
        if a2 > two_b2 {
            sa
        } else {
            sb
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact quotient; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_rational() {
            let c = &rhs.rat;
            return Some(QuadExt {
                rat: self.rat.checked_div(c)?,
                irr: if self.irr.is_zero() { Rational::zero() } else { self.irr.checked_div(c)? },
            });
        }
        // (a + b r)/(c + d r) = (a + b r)(c - d r) / (c^2 - 2 d^2)
        let (c, d) = (&rhs.rat, &rhs.irr);
        let dd = d * d;
        let norm = &(c * c) - &(&dd + &dd);
        let conj = QuadExt { rat: c.clone(), irr: -d };
        let num = self * &conj;
        Some(QuadExt { rat: num.rat.checked_div(&norm)?, irr: num.irr.checked_div(&norm)? })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, Error> {
        self.checked_div(rhs).ok_or(Error::DivisionByZero)
    }

    pub fn half(&self) -> Self {
        QuadExt { rat: self.rat.half(), irr: self.irr.half() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if self.irr.is_zero() {
            return Self::from_rational(&self.rat * k);
        }
        QuadExt { rat: &self.rat * k, irr: &self.irr * k }
    }

    pub fn pow(&self, exp: u32) -> Self {
        if self.irr.is_zero() {
            return Self::from_rational(self.rat.pow(exp));
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64() + self.irr.to_f64() * std::f64::consts::SQRT_2
    }
}

/// Exact midpoint `(x + y) / 2`.
pub fn midpoint(x: &QuadExt, y: &QuadExt) -> QuadExt {
    (x + y).half()
}

/// Three-way comparison of two field elements.
pub fn compare(x: &QuadExt, y: &QuadExt) -> Ordering {
    x.cmp(y)
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.irr == other.irr {
            return self.rat.cmp(&other.rat);
        }
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &'a QuadExt) -> QuadExt {
        let irr = if rhs.irr.is_zero() {
            self.irr.clone()
        } else if self.irr.is_zero() {
            rhs.irr.clone()
        } else {
            &self.irr + &rhs.irr
        };
        QuadExt { rat: &self.rat + &rhs.rat, irr }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &'a QuadExt) -> QuadExt {
        let irr = if rhs.irr.is_zero() { self.irr.clone() } else { &self.irr - &rhs.irr };
        QuadExt { rat: &self.rat - &rhs.rat, irr }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &'a QuadExt) -> QuadExt {
        if rhs.irr.is_zero() {
            return self.scale(&rhs.rat);
        }
        if self.irr.is_zero() {
            return rhs.scale(&self.rat);
        }
        let (a, b, c, d) = (&self.rat, &self.irr, &rhs.rat, &rhs.irr);
        let bd = b * d;
        QuadExt { rat: &(a * c) + &(&bd + &bd), irr: &(a * d) + &(b * c) }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { rat: -&self.rat, irr: -&self.irr }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'a QuadExt) -> QuadExt {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::from_rational(r)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::int(n)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else {
            write!(f, "{} + {}*sqrt2", self.rat, self.irr)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Accepts the rendered form `a + b*sqrt2` as well as `a`, `b*sqrt2`,
    /// `sqrt2`, `-sqrt2` and `a - b*sqrt2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(head) = compact.strip_suffix("sqrt2") else {
            return Ok(QuadExt::from_rational(compact.parse()?));
        };
        let head = head.strip_suffix('*').unwrap_or(head);
        let bytes = head.as_bytes();
        let split = (1..bytes.len()).find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
        let (rat_part, sign, coef) = match split {
            Some(i) => (&head[..i], &head[i..=i], &head[i + 1..]),
            None => ("0", "+", head),
        };
        let coef = match coef {
            "" | "+" => "1",
            "-" => "-1",
            c => c,
        };
        let mut irr: Rational = coef.parse().map_err(|_| Error::Parse(format!("not a Q(sqrt2) value: {s:?}")))?;
        if sign == "-" {
            irr = -irr;
        }
        let rat: Rational = rat_part.parse().map_err(|_| Error::Parse(format!("not a Q(sqrt2) value: {s:?}")))?;
        Ok(QuadExt { rat, irr })
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(QuadExt::int(n)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        let one = QuadExt::one();
        let d = one.checked_div(&q("1 + 1*sqrt2")).unwrap();
        assert_eq!(d, q("-1 + 1*sqrt2"));
        assert_eq!(compare(&q("3/2"), &QuadExt::sqrt2()), Ordering::Greater);
        assert_eq!(midpoint(&q("1/3"), &q("1/5")), q("4/15"));
        assert_eq!(midpoint(&q("7/3"), &QuadExt::sqrt2()).irr, Rational::new(1, 2));
        assert!(one.checked_div(&QuadExt::zero()).is_none());
    }

    #[test]
    fn render_parse_round_trip() {
        for s in ["0", "-3/2", "1 + -1*sqrt2", "0 + 1*sqrt2", "5/7 + 2/3*sqrt2"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("sqrt2"), QuadExt::sqrt2());
        assert_eq!(q("-sqrt2"), -QuadExt::sqrt2());
        assert_eq!(q("1 - 2*sqrt2"), q("1 + -2*sqrt2"));
        assert_eq!(q("-1/2-3*sqrt2"), q("-1/2 + -3*sqrt2"));
        assert!("1 + x*sqrt2".parse::<QuadExt>().is_err());
    }

    #[test]
    fn sign_cases() {
        assert_eq!(q("3 + -2*sqrt2").signum(), 1); // 9 > 8
        assert_eq!(q("-3 + 2*sqrt2").signum(), -1);
        assert_eq!(q("1 + -1*sqrt2").signum(), -1);
        assert_eq!(q("-1 + 1*sqrt2").signum(), 1);
    }
}
