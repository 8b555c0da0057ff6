use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactnum::QuadExt;

/// Closed-form expression used on one piece of a piecewise function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum Formula {
    Const(QuadExt),
    Identity,
    /// `m*x + c`
    Affine {
        m: QuadExt,
        c: QuadExt,
    },
    /// `1/x`
    Reciprocal,
    /// `x^n`
    Monomial(u32),
}

impl Formula {
    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt, Error> {
        Ok(match self {
            Formula::Const(c) => c.clone(),
            Formula::Identity => x.clone(),
            Formula::Affine { m, c } => &(m * x) + c,
            Formula::Reciprocal => QuadExt::one()
                .checked_div(x)
                .ok_or_else(|| Error::Eval { point: x.to_string(), reason: "reciprocal of zero".into() })?,
            Formula::Monomial(n) => x.pow(*n),
        })
    }

    /// Canonical spelling: `Affine(0, c)` is `Const(c)`, `x^1` is `Identity` and so on.
    pub fn normalized(self) -> Formula {
        match self {
            Formula::Affine { m, c } if m.is_zero() => Formula::Const(c),
            Formula::Affine { m, c } if m == QuadExt::one() && c.is_zero() => Formula::Identity,
            Formula::Monomial(0) => Formula::Const(QuadExt::one()),
            Formula::Monomial(1) => Formula::Identity,
            other => other,
        }
    }

    /// `(m, c)` for formulas of the form `m*x + c`.
    fn affine_parts(&self) -> Option<(QuadExt, QuadExt)> {
        match self {
            Formula::Const(c) => Some((QuadExt::zero(), c.clone())),
            Formula::Identity => Some((QuadExt::one(), QuadExt::zero())),
            Formula::Affine { m, c } => Some((m.clone(), c.clone())),
            _ => None,
        }
    }

    fn degree(&self) -> Option<u32> {
        match self {
            Formula::Identity => Some(1),
            Formula::Monomial(n) => Some(*n),
            Formula::Const(c) if *c == QuadExt::one() => Some(0),
            _ => None,
        }
    }

    pub fn scaled(&self, k: &QuadExt) -> Option<Formula> {
        if k.is_zero() {
            return Some(Formula::Const(QuadExt::zero()));
        }
        if *k == QuadExt::one() {
            return Some(self.clone());
        }
        let (m, c) = self.affine_parts()?;
        Some(Formula::Affine { m: k * &m, c: k * &c }.normalized())
    }

    pub fn plus(&self, other: &Formula) -> Option<Formula> {
        if let Formula::Const(c) = other {
            if c.is_zero() {
                return Some(self.clone());
            }
        }
        if let Formula::Const(c) = self {
            if c.is_zero() {
                return Some(other.clone());
            }
        }
        let (m1, c1) = self.affine_parts()?;
        let (m2, c2) = other.affine_parts()?;
        Some(Formula::Affine { m: &m1 + &m2, c: &c1 + &c2 }.normalized())
    }

    pub fn minus(&self, other: &Formula) -> Option<Formula> {
        self.plus(&other.scaled(&-QuadExt::one())?)
    }

    pub fn times(&self, other: &Formula) -> Option<Formula> {
        if let Formula::Const(c) = other {
            return self.scaled(c);
        }
        if let Formula::Const(c) = self {
            return other.scaled(c);
        }
        Some(Formula::Monomial(self.degree()? + other.degree()?).normalized())
    }

    /// Quotient; `Err` when dividing by the constant zero.
    pub fn over(&self, other: &Formula) -> Result<Option<Formula>, Error> {
        match (self, other) {
            (_, Formula::Const(c)) if c.is_zero() => Err(Error::DivisionByZero),
            (_, Formula::Const(c)) => Ok(self.scaled(&QuadExt::one().try_div(c)?)),
            (Formula::Const(c), Formula::Identity) if *c == QuadExt::one() => Ok(Some(Formula::Reciprocal)),
            _ => Ok(None),
        }
    }

    /// Limit of the formula at `a` when it is finite.
    pub fn limit_at(&self, a: &QuadExt) -> Option<QuadExt> {
        self.eval(a).ok()
    }

    /// Uniform continuity on an interval with the given ends (`None` = infinite).
    pub fn uniformly_continuous_on(&self, lo: Option<&QuadExt>, hi: Option<&QuadExt>) -> bool {
        match self {
            Formula::Const(_) | Formula::Identity | Formula::Affine { .. } => true,
            Formula::Monomial(n) => *n <= 1 || (lo.is_some() && hi.is_some()),
            Formula::Reciprocal => !(lo.is_some_and(|x| x.is_zero()) || hi.is_some_and(|x| x.is_zero())),
        }
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Formula::Const(c) => write!(f, "{c}"),
            Formula::Identity => write!(f, "x"),
            Formula::Affine { m, c } => write!(f, "({m})*x + ({c})"),
            Formula::Reciprocal => write!(f, "1/x"),
            Formula::Monomial(n) => write!(f, "x^{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_closes_where_expected() {
        assert_eq!(Formula::Identity.times(&Formula::Identity), Some(Formula::Monomial(2)));
        let two = QuadExt::int(2);
        let a = Formula::Affine { m: two.clone(), c: QuadExt::one() };
        assert_eq!(a.minus(&Formula::Affine { m: two, c: QuadExt::zero() }), Some(Formula::Const(QuadExt::one())));
        assert_eq!(Formula::Reciprocal.times(&Formula::Identity), None);
        assert!(Formula::Identity.over(&Formula::Const(QuadExt::zero())).is_err());
    }

    #[test]
    fn reciprocal_at_zero_is_error() {
        assert!(Formula::Reciprocal.eval(&QuadExt::zero()).is_err());
        assert_eq!(Formula::Monomial(3).eval(&QuadExt::int(-2)).unwrap(), QuadExt::int(-8));
    }
}
