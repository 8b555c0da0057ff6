//! Subsets of the real line: exact finite sets, truncated models of infinite
//! sets, finite unions of intervals and the two staircase constructions.

mod compiled;
mod intervals;
pub mod primes;
mod staircase;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactnum::{QuadExt, Rational};

pub use compiled::{Domain, DomainKind};
pub use intervals::{merge_interval_components, Component, GluePoint, Merge, SharedEndpoint};
pub use staircase::{
    breakpoints as staircase_breakpoints, build_staircase, Staircase, StaircaseParams, StaircaseVariant,
};

/// Serializable description of a subset of R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all_fields = "camelCase")]
pub enum DomainSpec {
    FinitePoints(Vec<QuadExt>),
    IntegerWindow {
        lo: i64,
        hi: i64,
    },
    /// `{1/p : p odd prime <= max_prime}`, optionally with 0.
    OddPrimeReciprocals {
        max_prime: u64,
        with_zero: bool,
    },
    /// `{1/n : 1 <= n <= max_n}`, optionally with 0.
    NaturalReciprocals {
        max_n: u64,
        with_zero: bool,
    },
    /// Rationals in `[lo, hi]` with denominator at most `max_den`.
    TruncatedRationals {
        max_den: u64,
        lo: Rational,
        hi: Rational,
        adjoin_sqrt2: bool,
    },
    IntervalUnion(Vec<IntervalPiece>),
    Staircase(StaircaseParams),
    UnionOf(Vec<DomainSpec>),
}

/// Interval with optional infinite ends; `None` stands for -inf / +inf.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct IntervalPiece {
    #[serde(with = "endpoint")]
    pub lo: Option<QuadExt>,
    #[serde(with = "endpoint")]
    pub hi: Option<QuadExt>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

mod endpoint {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactnum::QuadExt;

    pub fn serialize<S: Serializer>(v: &Option<QuadExt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.collect_str(x),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<QuadExt>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Some(QuadExt::int(n))),
            Raw::Text(t) => match t.trim() {
                "inf" | "+inf" | "-inf" => Ok(None),
                other => other.parse().map(Some).map_err(serde::de::Error::custom),
            },
        }
    }
}

impl IntervalPiece {
    pub fn closed(lo: QuadExt, hi: QuadExt) -> Self {
        IntervalPiece { lo: Some(lo), hi: Some(hi), lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: QuadExt, hi: QuadExt) -> Self {
        IntervalPiece { lo: Some(lo), hi: Some(hi), lo_closed: false, hi_closed: false }
    }

    pub fn new(lo: Option<QuadExt>, hi: Option<QuadExt>, lo_closed: bool, hi_closed: bool) -> Self {
        IntervalPiece { lo_closed: lo_closed && lo.is_some(), hi_closed: hi_closed && hi.is_some(), lo, hi }
    }

    pub fn point(x: QuadExt) -> Self {
        Self::closed(x.clone(), x)
    }

    pub fn real_line() -> Self {
        IntervalPiece { lo: None, hi: None, lo_closed: false, hi_closed: false }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if (self.lo.is_none() && self.lo_closed) || (self.hi.is_none() && self.hi_closed) {
            return Err(Error::InvalidDomain(format!("infinite end marked closed in {self}")));
        }
        if let (Some(lo), Some(hi)) = (&self.lo, &self.hi) {
            let ok = lo < hi || (lo == hi && self.lo_closed && self.hi_closed);
            if !ok {
                return Err(Error::InvalidDomain(format!("empty interval {self}")));
            }
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, x: &QuadExt) -> bool {
        let above = match &self.lo {
            None => true,
            Some(lo) => {
                if self.lo_closed {
                    x >= lo
                } else {
                    x > lo
                }
            }
        };
        above
            && match &self.hi {
                None => true,
                Some(hi) => {
                    if self.hi_closed {
                        x <= hi
                    } else {
                        x < hi
                    }
                }
            }
    }

    /// Set intersection, `None` when empty.
    pub fn intersect(&self, other: &IntervalPiece) -> Option<IntervalPiece> {
        let (lo, lo_closed) = match (&self.lo, &other.lo) {
            (None, None) => (None, false),
            (Some(a), None) => (Some(a.clone()), self.lo_closed),
            (None, Some(b)) => (Some(b.clone()), other.lo_closed),
            (Some(a), Some(b)) => match a.cmp(b) {
                std::cmp::Ordering::Greater => (Some(a.clone()), self.lo_closed),
                std::cmp::Ordering::Less => (Some(b.clone()), other.lo_closed),
                std::cmp::Ordering::Equal => (Some(a.clone()), self.lo_closed && other.lo_closed),
            },
        };
        let (hi, hi_closed) = match (&self.hi, &other.hi) {
            (None, None) => (None, false),
            (Some(a), None) => (Some(a.clone()), self.hi_closed),
            (None, Some(b)) => (Some(b.clone()), other.hi_closed),
            (Some(a), Some(b)) => match a.cmp(b) {
                std::cmp::Ordering::Less => (Some(a.clone()), self.hi_closed),
                std::cmp::Ordering::Greater => (Some(b.clone()), other.hi_closed),
                std::cmp::Ordering::Equal => (Some(a.clone()), self.hi_closed && other.hi_closed),
            },
        };
        let piece = IntervalPiece { lo, hi, lo_closed, hi_closed };
        piece.validate().ok().map(|_| piece)
    }

    /// `hi - lo` for bounded pieces.
    pub fn length(&self) -> Option<QuadExt> {
        Some(self.hi.as_ref()? - self.lo.as_ref()?)
    }

    /// Ordering by left end (with -inf first, closed before open), then right end.
    pub fn order_key_cmp(&self, other: &IntervalPiece) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let lo = match (&self.lo, &other.lo) {
            (None, None) => Equal,
            (None, Some(_)) => Less,
            (Some(_), None) => Greater,
            (Some(a), Some(b)) => a.cmp(b).then(other.lo_closed.cmp(&self.lo_closed)),
        };
        lo.then_with(|| match (&self.hi, &other.hi) {
            (None, None) => Equal,
            (None, Some(_)) => Greater,
            (Some(_), None) => Less,
            (Some(a), Some(b)) => a.cmp(b).then(self.hi_closed.cmp(&other.hi_closed)),
        })
    }
}

impl std::fmt::Display for IntervalPiece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        let lo = self.lo.as_ref().map_or("-inf".to_string(), |x| x.to_string());
        let hi = self.hi.as_ref().map_or("inf".to_string(), |x| x.to_string());
        write!(f, "{l}{lo}, {hi}{r}")
    }
}

/// Sorted members of an enumerable domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enumeration {
    pub points: Vec<QuadExt>,
    pub truncated: bool,
}

/// Pair `x > y` with midpoint `center` and half-distance `h = (x - y)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricPair {
    pub x: QuadExt,
    pub y: QuadExt,
    pub center: QuadExt,
    pub h: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSet {
    pub pairs: Vec<SymmetricPair>,
    pub truncated: bool,
}

/// Smallest distance between distinct members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinGap {
    /// `None` for fewer than two points or for sets with accumulation points.
    pub value: Option<QuadExt>,
    /// The value describes a finite model or a capped enumeration rather
    /// than the set itself.
    pub truncated: bool,
}

/// Default enumeration cap for the convenience entry points below.
pub const DEFAULT_ENUM_LIMIT: usize = 100_000;

impl DomainSpec {
    pub fn compile(&self) -> Result<Domain, Error> {
        Domain::compile(self)
    }

    pub fn contains(&self, x: &QuadExt) -> Result<bool, Error> {
        Ok(self.compile()?.contains(x))
    }
}

pub fn contains(d: &DomainSpec, x: &QuadExt) -> Result<bool, Error> {
    d.contains(x)
}

/// Strictly increasing members of `d`, at most `limit` of them.
pub fn enumerate_points(d: &DomainSpec, limit: usize) -> Result<Enumeration, Error> {
    d.compile()?.enumerate(limit)
}

/// Symmetric pairs of `ambient` with midpoint in `centers` and `h < delta_max`,
/// ordered by `h`, then `x`, then `y`.
pub fn symmetric_pairs(
    ambient: &DomainSpec,
    centers: &DomainSpec,
    delta_max: &QuadExt,
    max_pairs: usize,
) -> Result<PairSet, Error> {
    let a = ambient.compile()?;
    let b = centers.compile()?;
    let en = a.enumerate(DEFAULT_ENUM_LIMIT)?;
    let pts = &en.points;
    let two_delta = delta_max + delta_max;
    let mut pairs = Vec::new();
    let mut truncated = en.truncated;
    'outer: for i in 0..pts.len() {
        for j in (0..i).rev() {
            let gap = &pts[i] - &pts[j];
            if gap >= two_delta {
                break;
            }
            let c = crate::exactnum::midpoint(&pts[i], &pts[j]);
            if b.contains(&c) {
                if pairs.len() == max_pairs {
                    truncated = true;
                    break 'outer;
                }
                pairs.push(SymmetricPair { x: pts[i].clone(), y: pts[j].clone(), center: c, h: gap.half() });
            }
        }
    }
    pairs.sort_by(|p, q| p.h.cmp(&q.h).then_with(|| p.x.cmp(&q.x)).then_with(|| p.y.cmp(&q.y)));
    Ok(PairSet { pairs, truncated })
}

pub fn min_gap(d: &DomainSpec, limit: usize) -> Result<MinGap, Error> {
    d.compile()?.min_gap(limit)
}
