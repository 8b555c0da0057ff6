use serde::{Deserialize, Serialize};

use super::{DomainSpec, IntervalPiece};
use crate::error::Error;
use crate::exactnum::{QuadExt, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StaircaseVariant {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseParams {
    pub variant: StaircaseVariant,
    /// Number of closed blocks `[a_{2i-1}, a_{2i}]`.
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    /// `breakpoints[i]` is `a_{i+1}`.
    pub breakpoints: Vec<Rational>,
    pub domain: DomainSpec,
}

impl Staircase {
    /// `a_n` with the 1-based indexing used for the construction.
    pub fn a(&self, n: usize) -> &Rational {
        &self.breakpoints[n - 1]
    }

    pub fn block(&self, i: usize) -> (&Rational, &Rational) {
        (self.a(2 * i - 1), self.a(2 * i))
    }
}

/// First `count` terms of the breakpoint sequence.
pub fn breakpoints(variant: StaircaseVariant, count: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(count);
    match variant {
        StaircaseVariant::A => {
            for idx in 1..=count {
                let v = if idx == 1 {
                    Rational::one()
                } else {
                    // idx = 4n-3, 4n-2, 4n-1, 4n
                    let n = (idx as i64 + 3) / 4;
                    let step = match idx % 4 {
                        1 => Rational::one(),
                        2 => Rational::new(1, n + 1),
                        3 => Rational::new(1, n),
                        _ => Rational::new(1, n + 1),
                    };
                    &a[idx - 2] + &step
                };
                a.push(v);
            }
        }
        StaircaseVariant::B => {
            for idx in 1..=count {
                let v = if idx == 1 { Rational::zero() } else { &a[idx - 2] + &Rational::new(1, idx as i64 - 1) };
                a.push(v);
            }
        }
    }
    a
}

pub fn build_staircase(params: &StaircaseParams) -> Result<Staircase, Error> {
    if params.blocks == 0 {
        return Err(Error::InvalidDomain("staircase needs at least one block".into()));
    }
    let bp = breakpoints(params.variant, 2 * params.blocks);
    let pieces = bp
        .chunks(2)
        .map(|w| IntervalPiece::closed(QuadExt::from_rational(w[0].clone()), QuadExt::from_rational(w[1].clone())))
        .collect();
    Ok(Staircase { breakpoints: bp, domain: DomainSpec::IntervalUnion(pieces) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let a = breakpoints(StaircaseVariant::A, 8);
        let want = ["1", "3/2", "5/2", "3", "4", "13/3", "29/6", "31/6"];
        for (got, w) in a.iter().zip(want) {
            assert_eq!(got.to_string(), w);
        }
        let b = breakpoints(StaircaseVariant::B, 4);
        let want = ["0", "1", "3/2", "11/6"];
        for (got, w) in b.iter().zip(want) {
            assert_eq!(got.to_string(), w);
        }
    }
}
