use std::collections::HashSet;

use num_traits::ToPrimitive;

use super::primes::{is_prime, odd_primes_up_to, sieve};
use super::staircase::build_staircase;
use super::{merge_interval_components, DomainSpec, Enumeration, IntervalPiece, MinGap};
use crate::error::Error;
use crate::exactnum::{QuadExt, Rational};

/// A `DomainSpec` prepared for fast membership tests.
#[derive(Debug, Clone)]
pub struct Domain {
    spec: DomainSpec,
    kind: DomainKind,
}

#[derive(Debug, Clone)]
pub enum DomainKind {
    Points {
        sorted: Vec<QuadExt>,
        set: HashSet<QuadExt>,
    },
    Integers {
        lo: i64,
        hi: i64,
    },
    OddPrimeReciprocals {
        max: u64,
        with_zero: bool,
        table: Option<Vec<bool>>,
    },
    NaturalReciprocals {
        max: u64,
        with_zero: bool,
    },
    TruncatedRationals {
        max_den: u64,
        lo: Rational,
        hi: Rational,
        sqrt2: bool,
    },
    /// Sorted, pairwise disjoint pieces; `staircase` marks staircase blocks.
    Intervals {
        pieces: Vec<IntervalPiece>,
        staircase: bool,
    },
    Union(Vec<Domain>),
}

const SIEVE_CAP: u64 = 5_000_000;

impl Domain {
    pub fn compile(spec: &DomainSpec) -> Result<Domain, Error> {
        let kind = match spec {
            DomainSpec::FinitePoints(pts) => {
                let set: HashSet<QuadExt> = pts.iter().cloned().collect();
                let mut sorted: Vec<QuadExt> = set.iter().cloned().collect();
                sorted.sort();
                DomainKind::Points { sorted, set }
            }
            DomainSpec::IntegerWindow { lo, hi } => {
                if lo > hi {
                    return Err(Error::InvalidDomain(format!("empty integer window [{lo}, {hi}]")));
                }
                DomainKind::Integers { lo: *lo, hi: *hi }
            }
            DomainSpec::OddPrimeReciprocals { max_prime, with_zero } => DomainKind::OddPrimeReciprocals {
                max: *max_prime,
                with_zero: *with_zero,
                table: (*max_prime <= SIEVE_CAP).then(|| sieve(*max_prime as usize)),
            },
            DomainSpec::NaturalReciprocals { max_n, with_zero } => {
                DomainKind::NaturalReciprocals { max: *max_n, with_zero: *with_zero }
            }
            DomainSpec::TruncatedRationals { max_den, lo, hi, adjoin_sqrt2 } => {
                if *max_den == 0 || lo > hi {
                    return Err(Error::InvalidDomain("truncated rationals need max_den >= 1 and lo <= hi".into()));
                }
                DomainKind::TruncatedRationals {
                    max_den: *max_den,
                    lo: lo.clone(),
                    hi: hi.clone(),
                    sqrt2: *adjoin_sqrt2,
                }
            }
            DomainSpec::IntervalUnion(pieces) => {
                DomainKind::Intervals { pieces: sorted_disjoint(pieces)?, staircase: false }
            }
            DomainSpec::Staircase(params) => {
                let st = build_staircase(params)?;
                let DomainSpec::IntervalUnion(pieces) = st.domain else { unreachable!() };
                DomainKind::Intervals { pieces, staircase: true }
            }
            DomainSpec::UnionOf(parts) => {
                DomainKind::Union(parts.iter().map(Domain::compile).collect::<Result<_, _>>()?)
            }
        };
        Ok(Domain { spec: spec.clone(), kind })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn contains(&self, x: &QuadExt) -> bool {
        match &self.kind {
            DomainKind::Points { set, .. } => set.contains(x),
            DomainKind::Integers { lo, hi } => match x.as_rational().and_then(|r| r.as_small()) {
                Some((n, 1)) => *lo <= n && n <= *hi,
                _ => false,
            },
            DomainKind::OddPrimeReciprocals { max, with_zero, table } => {
                if x.is_zero() {
                    return *with_zero;
                }
                match x.as_rational().and_then(|r| r.as_small()) {
                    Some((1, d)) => {
                        let d = d as u64;
                        d % 2 == 1
                            && d <= *max
                            && match table {
                                Some(t) => t[d as usize],
                                None => is_prime(d),
                            }
                    }
                    _ => false,
                }
            }
            DomainKind::NaturalReciprocals { max, with_zero } => {
                if x.is_zero() {
                    return *with_zero;
                }
                matches!(x.as_rational().and_then(|r| r.as_small()), Some((1, d)) if (d as u64) <= *max)
            }
            DomainKind::TruncatedRationals { max_den, lo, hi, sqrt2 } => match x.as_rational() {
                Some(r) => r >= lo && r <= hi && r.denom().to_u64().is_some_and(|d| d <= *max_den),
                None => {
                    *sqrt2 && *x == QuadExt::sqrt2() && {
                        let (l, h) = (QuadExt::from_rational(lo.clone()), QuadExt::from_rational(hi.clone()));
                        l <= *x && *x <= h
                    }
                }
            },
            DomainKind::Intervals { pieces, .. } => interval_lookup(pieces, x).is_some(),
            DomainKind::Union(parts) => parts.iter().any(|d| d.contains(x)),
        }
    }

    /// Exact finite set, as opposed to a truncated model of an infinite one
    /// or a set with interior.
    pub fn is_exact_finite(&self) -> bool {
        match &self.kind {
            DomainKind::Points { .. } | DomainKind::Integers { .. } => true,
            DomainKind::Intervals { pieces, staircase } => !staircase && pieces.iter().all(|p| p.is_degenerate()),
            DomainKind::Union(parts) => parts.iter().all(|d| d.is_exact_finite()),
            _ => false,
        }
    }

    /// Finite model standing in for an infinite set.
    pub fn is_model(&self) -> bool {
        match &self.kind {
            DomainKind::OddPrimeReciprocals { .. }
            | DomainKind::NaturalReciprocals { .. }
            | DomainKind::TruncatedRationals { .. } => true,
            DomainKind::Intervals { staircase, .. } => *staircase,
            DomainKind::Union(parts) => parts.iter().any(|d| d.is_model()),
            _ => false,
        }
    }

    /// Every member can be listed (possibly subject to a cap).
    pub fn is_enumerable(&self) -> bool {
        match &self.kind {
            DomainKind::Intervals { pieces, staircase } => !staircase && pieces.iter().all(|p| p.is_degenerate()),
            DomainKind::Union(parts) => parts.iter().all(|d| d.is_enumerable()),
            _ => true,
        }
    }

    /// Interval pieces (including staircase blocks) of this domain and its
    /// union parts.
    pub fn interval_pieces(&self) -> Vec<IntervalPiece> {
        match &self.kind {
            DomainKind::Intervals { pieces, .. } => pieces.iter().filter(|p| !p.is_degenerate()).cloned().collect(),
            DomainKind::Union(parts) => parts.iter().flat_map(|d| d.interval_pieces()).collect(),
            _ => Vec::new(),
        }
    }

    /// The piece containing `x`, for interval domains.
    pub fn piece_of(&self, x: &QuadExt) -> Option<&IntervalPiece> {
        match &self.kind {
            DomainKind::Intervals { pieces, .. } => interval_lookup(pieces, x),
            DomainKind::Union(parts) => parts.iter().find_map(|d| d.piece_of(x)),
            _ => None,
        }
    }

    /// Scale below which a truncated model no longer resembles the set it
    /// stands for; `None` for exact sets.
    pub fn resolution_floor(&self) -> Option<QuadExt> {
        match &self.kind {
            DomainKind::OddPrimeReciprocals { max, .. } | DomainKind::NaturalReciprocals { max, .. } => {
                Some(QuadExt::from_rational(Rational::new(2, (*max).max(1) as i64)))
            }
            DomainKind::TruncatedRationals { max_den, .. } => {
                Some(QuadExt::from_rational(Rational::new(2, (*max_den).max(1) as i64)))
            }
            DomainKind::Intervals { pieces, staircase: true } => {
                let gap = pieces.windows(2).filter_map(|w| Some(w[1].lo.as_ref()? - w[0].hi.as_ref()?)).min()?;
                Some(&gap + &gap)
            }
            DomainKind::Union(parts) => parts.iter().filter_map(|d| d.resolution_floor()).max(),
            _ => None,
        }
    }

    pub fn enumerate(&self, limit: usize) -> Result<Enumeration, Error> {
        let (mut points, mut truncated) = match &self.kind {
            DomainKind::Points { sorted, .. } => (sorted.iter().take(limit).cloned().collect(), sorted.len() > limit),
            DomainKind::Integers { lo, hi } => {
                let count = (*hi as i128 - *lo as i128 + 1) as u128;
                let take = count.min(limit as u128) as i64;
                ((0..take).map(|i| QuadExt::int(lo + i)).collect(), count > limit as u128)
            }
            DomainKind::OddPrimeReciprocals { max, with_zero, .. } => {
                let room = limit.saturating_sub(*with_zero as usize);
                let (primes, cut) = odd_primes_up_to(*max, room);
                let mut v: Vec<QuadExt> = primes.iter().map(|&p| QuadExt::frac(1, p as i64)).collect();
                let mut cut = cut;
                if *with_zero {
                    if limit == 0 {
                        cut = true;
                    } else {
                        v.push(QuadExt::zero());
                    }
                }
                (v, cut)
            }
            DomainKind::NaturalReciprocals { max, with_zero } => {
                let room = limit.saturating_sub(*with_zero as usize) as u64;
                let take = (*max).min(room);
                let mut v: Vec<QuadExt> = (1..=take).map(|n| QuadExt::frac(1, n as i64)).collect();
                let mut cut = take < *max;
                if *with_zero {
                    if limit == 0 {
                        cut = true;
                    } else {
                        v.push(QuadExt::zero());
                    }
                }
                (v, cut)
            }
            DomainKind::TruncatedRationals { max_den, lo, hi, sqrt2 } => {
                let mut v = Vec::new();
                let mut cut = false;
                'den: for q in 1..=*max_den {
                    let qr = Rational::from_integer(q as i64);
                    let start = (lo * &qr).ceil();
                    let end = (hi * &qr).floor();
                    let (Some(start), Some(end)) = (start.to_i64(), end.to_i64()) else {
                        return Err(Error::InvalidDomain("truncated rational bounds too large".into()));
                    };
                    for p in start..=end {
                        if num_integer::gcd(p.unsigned_abs(), q) == 1 {
                            if v.len() == limit {
                                cut = true;
                                break 'den;
                            }
                            v.push(QuadExt::frac(p, q as i64));
                        }
                    }
                }
                let s2 = QuadExt::sqrt2();
                if *sqrt2 && QuadExt::from_rational(lo.clone()) <= s2 && s2 <= QuadExt::from_rational(hi.clone()) {
                    if v.len() == limit {
                        cut = true;
                    } else {
                        v.push(s2);
                    }
                }
                (v, cut)
            }
            DomainKind::Intervals { pieces, staircase } => {
                if *staircase || pieces.iter().any(|p| !p.is_degenerate()) {
                    return Err(Error::NotEnumerable(format!("{:?} has interior", short(&self.spec))));
                }
                let v: Vec<QuadExt> = pieces.iter().take(limit).filter_map(|p| p.lo.clone()).collect();
                (v, pieces.len() > limit)
            }
            DomainKind::Union(parts) => {
                let mut v = Vec::new();
                let mut cut = false;
                for d in parts {
                    let e = d.enumerate(limit)?;
                    cut |= e.truncated;
                    v.extend(e.points);
                }
                (v, cut)
            }
        };
        points.sort();
        points.dedup();
        if points.len() > limit {
            points.truncate(limit);
            truncated = true;
        }
        Ok(Enumeration { points, truncated })
    }

    pub fn min_gap(&self, limit: usize) -> Result<MinGap, Error> {
        match &self.kind {
            DomainKind::Integers { lo, hi } => {
                return Ok(MinGap { value: (hi > lo).then(QuadExt::one), truncated: false });
            }
            DomainKind::Intervals { pieces, staircase } if *staircase || pieces.iter().any(|p| !p.is_degenerate()) => {
                return Ok(MinGap { value: None, truncated: false });
            }
            DomainKind::Union(_) if !self.is_enumerable() => return Ok(MinGap { value: None, truncated: false }),
            _ => {}
        }
        let en = self.enumerate(limit)?;
        let value = en.points.windows(2).map(|w| &w[1] - &w[0]).min();
        Ok(MinGap { value, truncated: en.truncated || self.is_model() })
    }
}

fn short(d: &DomainSpec) -> &'static str {
    match d {
        DomainSpec::FinitePoints(_) => "FinitePoints",
        DomainSpec::IntegerWindow { .. } => "IntegerWindow",
        DomainSpec::OddPrimeReciprocals { .. } => "OddPrimeReciprocals",
        DomainSpec::NaturalReciprocals { .. } => "NaturalReciprocals",
        DomainSpec::TruncatedRationals { .. } => "TruncatedRationals",
        DomainSpec::IntervalUnion(_) => "IntervalUnion",
        DomainSpec::Staircase(_) => "Staircase",
        DomainSpec::UnionOf(_) => "UnionOf",
    }
}

fn sorted_disjoint(pieces: &[IntervalPiece]) -> Result<Vec<IntervalPiece>, Error> {
    merge_interval_components(pieces)?;
    let mut v = pieces.to_vec();
    v.sort_by(|a, b| a.order_key_cmp(b));
    Ok(v)
}

/// Binary search over sorted disjoint pieces.
pub(crate) fn interval_lookup<'a>(pieces: &'a [IntervalPiece], x: &QuadExt) -> Option<&'a IntervalPiece> {
    let idx = pieces.partition_point(|p| p.lo.as_ref().is_none_or(|lo| lo <= x));
    // several pieces may start at x (a point piece and an open piece)
    pieces[..idx].iter().rev().take(3).find(|p| p.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_reciprocals() {
        let d = Domain::compile(&DomainSpec::OddPrimeReciprocals { max_prime: 12, with_zero: true }).unwrap();
        let e = d.enumerate(100).unwrap();
        let want: Vec<QuadExt> = ["0", "1/11", "1/7", "1/5", "1/3"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(e.points, want);
        assert!(!e.truncated);
        assert!(d.contains(&QuadExt::frac(1, 7)));
        assert!(!d.contains(&QuadExt::frac(1, 9)));
        assert!(!d.contains(&QuadExt::frac(2, 7)));
        assert!(!d.contains(&QuadExt::frac(1, 13)));
    }

    #[test]
    fn interval_membership_at_shared_ends() {
        let pieces = vec![
            IntervalPiece::open(QuadExt::int(0), QuadExt::int(1)),
            IntervalPiece::point(QuadExt::int(1)),
            IntervalPiece::open(QuadExt::int(1), QuadExt::int(2)),
        ];
        let d = Domain::compile(&DomainSpec::IntervalUnion(pieces)).unwrap();
        for (x, want) in [("0", false), ("1/2", true), ("1", true), ("3/2", true), ("2", false)] {
            assert_eq!(d.contains(&x.parse().unwrap()), want, "{x}");
        }
    }

    #[test]
    fn truncated_rationals() {
        let spec = DomainSpec::TruncatedRationals {
            max_den: 4,
            lo: Rational::zero(),
            hi: Rational::one(),
            adjoin_sqrt2: false,
        };
        let d = Domain::compile(&spec).unwrap();
        let e = d.enumerate(100).unwrap();
        let got: Vec<String> = e.points.iter().map(|x| x.to_string()).collect();
        assert_eq!(got, ["0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"]);
        assert!(d.contains(&QuadExt::frac(2, 4)));
        assert!(!d.contains(&QuadExt::frac(1, 5)));
        let e = d.enumerate(3).unwrap();
        assert!(e.truncated);
        assert_eq!(e.points.len(), 3);
    }
}
