use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{Notion, SequenceTerm, WitnessSequence};
use crate::domains::primes::odd_primes_up_to;
use crate::domains::{build_staircase, DomainSpec, IntervalPiece, Staircase, StaircaseParams, StaircaseVariant};
use crate::error::Error;
use crate::exactnum::{QuadExt, Rational};
use crate::functions::{CombineOp, Formula, FuncSpec, Piece};

/// Stable catalog identifiers, in report order.
pub const EXAMPLE_IDS: [&str; 12] = [
    "ex-2.4", "ex-2.5", "ex-2.7", "ex-2.8", "ex-3.2", "ex-3.3", "ex-3.5", "ex-3.6", "ex-3.7", "ex-3.8", "ex-3.9",
    "ex-4.3",
];

pub const PRIME_BOUND: u64 = 1000;
pub const NATURAL_BOUND: u64 = 1000;
pub const RATIONAL_DENOMINATOR: u64 = 200;
pub const STAIRCASE_BLOCKS: usize = 100;
pub const INTEGER_WINDOW: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    Proven,
    Refuted,
    /// Asserted for an infinite set; matched on the finite model by a
    /// proof or by a modulus that is exactly zero at every resolved scale.
    ProvenOnTruncation,
}

impl Expected {
    pub fn label(self) -> &'static str {
        match self {
            Expected::Proven => "Proven",
            Expected::Refuted => "Refuted",
            Expected::ProvenOnTruncation => "Proven-on-truncation",
        }
    }

    fn positive(self) -> bool {
        !matches!(self, Expected::Refuted)
    }
}

/// One (domain, function) pair inside an example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Subject {
    pub label: String,
    pub ambient: DomainSpec,
    pub function: FuncSpec,
    /// Centre set for USC with respect to a subset.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub centers: Option<DomainSpec>,
    pub expected: Vec<(Notion, Expected)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_exponent: Option<u32>,
    pub witnesses: Vec<WitnessSequence>,
}

/// Side computations an example relies on besides the verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all_fields = "camelCase")]
pub enum ExtraCheck {
    MidpointExclusionPrimes {
        bound: u64,
    },
    MidpointInclusionNaturals {
        bound: u64,
    },
    /// The sup of `|f|` over nested truncations equals the largest prime.
    UnboundedGrowth {
        function: FuncSpec,
        bounds: Vec<u64>,
    },
    OneSidedJump {
        function: FuncSpec,
        at: QuadExt,
        left: QuadExt,
        right: QuadExt,
    },
    /// A pointwise (not uniform) limit: the distance to the limit stagnates.
    PointwiseLimit {
        members: Vec<FuncSpec>,
        limit: FuncSpec,
        ambient: DomainSpec,
    },
    StaircaseProof {
        blocks: usize,
    },
    StaircaseWitness {
        terms: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogEntry {
    pub id: String,
    pub title: String,
    pub description: String,
    pub parameters: BTreeMap<String, String>,
    pub subjects: Vec<Subject>,
    pub checks: Vec<ExtraCheck>,
}

impl CatalogEntry {
    /// Expectations that contradict `UC => USC => SC` or `UC => C => SC`.
    pub fn inconsistencies(&self) -> Vec<String> {
        const CHAIN: [(Notion, Notion); 5] = [
            (Notion::UC, Notion::USC),
            (Notion::UC, Notion::C),
            (Notion::USC, Notion::SC),
            (Notion::C, Notion::SC),
            (Notion::UC, Notion::SC),
        ];
        let mut out = Vec::new();
        for s in &self.subjects {
            let get = |n: Notion| s.expected.iter().find(|(m, _)| *m == n).map(|(_, e)| *e);
            for (a, b) in CHAIN {
                if let (Some(ea), Some(eb)) = (get(a), get(b)) {
                    if ea.positive() && !eb.positive() {
                        out.push(format!("{}: {a} expected to hold but {b} expected to fail", s.label));
                    }
                }
            }
        }
        out
    }
}

fn q(n: i64, d: i64) -> QuadExt {
    QuadExt::frac(n, d)
}

fn int(n: i64) -> QuadExt {
    QuadExt::int(n)
}

fn pieces(parts: Vec<(DomainSpec, Formula)>) -> FuncSpec {
    FuncSpec::Piecewise(parts.into_iter().map(|(region, formula)| Piece { region, formula }).collect())
}

fn interval(p: IntervalPiece) -> DomainSpec {
    DomainSpec::IntervalUnion(vec![p])
}

fn positive_half_line() -> IntervalPiece {
    IntervalPiece::new(Some(QuadExt::zero()), None, false, false)
}

fn seq(notion: Notion, description: &str, terms: Vec<SequenceTerm>) -> WitnessSequence {
    WitnessSequence { notion, description: description.into(), terms }
}

fn term(n: u64, x: QuadExt, y: QuadExt, claimed: QuadExt) -> SequenceTerm {
    SequenceTerm { n, x, y, claimed: Some(claimed) }
}

/// `f = 2i - 1` on the `i`-th block.
pub fn step_function(stair: &Staircase) -> FuncSpec {
    let blocks = stair.breakpoints.len() / 2;
    pieces(
        (1..=blocks)
            .map(|i| {
                let (lo, hi) = stair.block(i);
                let block =
                    IntervalPiece::closed(QuadExt::from_rational(lo.clone()), QuadExt::from_rational(hi.clone()));
                (interval(block), Formula::Const(int(2 * i as i64 - 1)))
            })
            .collect(),
    )
}

/// 1 on the reciprocals, 0 at 0.
fn indicator(reciprocals: DomainSpec) -> FuncSpec {
    pieces(vec![
        (reciprocals, Formula::Const(int(1))),
        (DomainSpec::FinitePoints(vec![QuadExt::zero()]), Formula::Const(int(0))),
    ])
}

/// `1/x` off zero, 0 at zero.
fn reciprocal_with_zero() -> FuncSpec {
    pieces(vec![
        (interval(IntervalPiece::new(None, Some(QuadExt::zero()), false, false)), Formula::Reciprocal),
        (DomainSpec::FinitePoints(vec![QuadExt::zero()]), Formula::Const(int(0))),
        (interval(positive_half_line()), Formula::Reciprocal),
    ])
}

fn example(id: &str, title: &str, description: &str) -> CatalogEntry {
    CatalogEntry {
        id: id.into(),
        title: title.into(),
        description: description.into(),
        parameters: BTreeMap::new(),
        subjects: Vec::new(),
        checks: Vec::new(),
    }
}

fn subject(label: &str, ambient: DomainSpec, function: FuncSpec, expected: &[(Notion, Expected)]) -> Subject {
    Subject {
        label: label.into(),
        ambient,
        function,
        centers: None,
        expected: expected.to_vec(),
        grid_exponent: None,
        witnesses: Vec::new(),
    }
}

use Expected::{Proven, ProvenOnTruncation, Refuted};
use Notion::{C, SC, UC, USC};

/// Build a catalog entry. `seed` drives the random function of `ex-3.6`.
pub fn build_example(id: &str, seed: u64) -> Result<CatalogEntry, Error> {
    let ex = match id {
        "ex-2.4" => {
            let mut e = example(
                "ex-2.4",
                "1/x on (0, inf)",
                "continuous and symmetrically continuous but neither uniformly symmetrically continuous nor \
                 uniformly continuous; the interval is decided from its formula and sampled on a dyadic grid \
                 (bounded window for the unbounded end), with the witness family x = 3/n, y = 1/n",
            );
            let mut s = subject(
                "f",
                interval(positive_half_line()),
                FuncSpec::single(interval(positive_half_line()), Formula::Reciprocal),
                &[(C, Proven), (SC, Proven), (UC, Refuted), (USC, Refuted)],
            );
            s.witnesses.push(seq(
                USC,
                "x = 3/n, y = 1/n, centre 2/n, |f(x) - f(y)| = 2n/3",
                (1..=64).map(|n| term(n, q(3, n as i64), q(1, n as i64), q(2 * n as i64, 3))).collect(),
            ));
            e.subjects.push(s);
            e
        }
        "ex-2.5" => {
            let mut e = example(
                "ex-2.5",
                "odd-prime reciprocal indicator",
                "uniformly symmetrically continuous (no symmetric pair exists) but not continuous at 0",
            );
            e.parameters.insert("maxPrime".into(), PRIME_BOUND.to_string());
            let ambient = DomainSpec::OddPrimeReciprocals { max_prime: PRIME_BOUND, with_zero: true };
            let f = indicator(DomainSpec::OddPrimeReciprocals { max_prime: PRIME_BOUND, with_zero: false });
            let mut s = subject("f", ambient, f, &[(USC, Proven), (SC, Proven), (C, Refuted), (UC, Refuted)]);
            let (primes, _) = odd_primes_up_to(PRIME_BOUND, usize::MAX);
            s.witnesses.push(seq(
                C,
                "x = 1/p, y = 0 over the odd primes, |f(x) - f(y)| = 1",
                primes.iter().map(|&p| term(p, q(1, p as i64), QuadExt::zero(), int(1))).collect(),
            ));
            e.subjects.push(s);
            e.checks.push(ExtraCheck::MidpointExclusionPrimes { bound: PRIME_BOUND });
            e
        }
        "ex-2.7" => {
            let mut e = example(
                "ex-2.7",
                "natural reciprocal indicator",
                "the same indicator on {1/n} U {0} is not uniformly symmetrically continuous: (1/n + 0)/2 = 1/(2n) is in the set",
            );
            e.parameters.insert("maxN".into(), NATURAL_BOUND.to_string());
            let ambient = DomainSpec::NaturalReciprocals { max_n: NATURAL_BOUND, with_zero: true };
            let f = indicator(DomainSpec::NaturalReciprocals { max_n: NATURAL_BOUND, with_zero: false });
            let mut s = subject("f", ambient, f, &[(USC, Refuted), (UC, Refuted), (C, Refuted)]);
            s.witnesses.push(seq(
                USC,
                "x = 1/n, y = 0, centre 1/(2n), |f(x) - f(y)| = 1",
                (1..=NATURAL_BOUND / 2).map(|n| term(n, q(1, n as i64), QuadExt::zero(), int(1))).collect(),
            ));
            e.subjects.push(s);
            e.checks.push(ExtraCheck::MidpointInclusionNaturals { bound: NATURAL_BOUND });
            e
        }
        "ex-2.8" => {
            let mut e = example(
                "ex-2.8",
                "Q U {sqrt2}",
                "f = 1 on the rationals and sqrt2 at sqrt2; (q + sqrt2)/2 is irrational so no symmetric pair \
                 touches sqrt2. Modelled by the rationals in [0, 2] with denominator at most 200",
            );
            e.parameters.insert("maxDenominator".into(), RATIONAL_DENOMINATOR.to_string());
            let lo = Rational::zero();
            let hi = Rational::from_integer(2);
            let rationals = DomainSpec::TruncatedRationals {
                max_den: RATIONAL_DENOMINATOR,
                lo: lo.clone(),
                hi: hi.clone(),
                adjoin_sqrt2: false,
            };
            let ambient = DomainSpec::TruncatedRationals { max_den: RATIONAL_DENOMINATOR, lo, hi, adjoin_sqrt2: true };
            let f = pieces(vec![
                (rationals, Formula::Const(int(1))),
                (DomainSpec::FinitePoints(vec![QuadExt::sqrt2()]), Formula::Const(QuadExt::sqrt2())),
            ]);
            let mut s = subject(
                "f",
                ambient,
                f,
                &[(USC, ProvenOnTruncation), (SC, ProvenOnTruncation), (C, Refuted), (UC, Refuted)],
            );
            // convergents of the continued fraction of sqrt2
            let convergents = [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70), (239, 169)];
            let jump = &QuadExt::sqrt2() - &int(1);
            s.witnesses.push(seq(
                C,
                "convergents p/q -> sqrt2, |f(p/q) - f(sqrt2)| = sqrt2 - 1",
                convergents.iter().map(|&(p, d)| term(d as u64, q(p, d), QuadExt::sqrt2(), jump.clone())).collect(),
            ));
            e.subjects.push(s);
            e
        }
        "ex-3.2" => {
            let mut e = example(
                "ex-3.2",
                "product of identities",
                "f = g = x are uniformly continuous on R but fg = x^2 is not uniformly symmetrically continuous",
            );
            let line = interval(IntervalPiece::real_line());
            let id = FuncSpec::single(line.clone(), Formula::Identity);
            e.subjects.push(subject("f = g = x", line.clone(), id.clone(), &[(UC, Proven), (USC, Proven)]));
            let mut s = subject(
                "fg",
                line,
                FuncSpec::Combined { op: CombineOp::Mul, operands: vec![id.clone(), id] },
                &[(C, Proven), (SC, Proven), (UC, Refuted), (USC, Refuted)],
            );
            s.witnesses.push(seq(
                USC,
                "x = n + 1/n, y = n, |fg(x) - fg(y)| = 2 + 1/n^2",
                (1..=64).map(|n: i64| term(n as u64, &int(n) + &q(1, n), int(n), &int(2) + &q(1, n * n))).collect(),
            ));
            e.subjects.push(s);
            e
        }
        "ex-3.3" => {
            let mut e = example(
                "ex-3.3",
                "unbounded prime map",
                "f(1/p) = p, f(0) = 0 is uniformly symmetrically continuous on a bounded set yet unbounded",
            );
            let ambient = DomainSpec::OddPrimeReciprocals { max_prime: PRIME_BOUND, with_zero: true };
            let f = pieces(vec![
                (DomainSpec::OddPrimeReciprocals { max_prime: PRIME_BOUND, with_zero: false }, Formula::Reciprocal),
                (DomainSpec::FinitePoints(vec![QuadExt::zero()]), Formula::Const(int(0))),
            ]);
            e.subjects.push(subject("f", ambient, f.clone(), &[(USC, Proven), (SC, Proven)]));
            e.checks.push(ExtraCheck::UnboundedGrowth { function: f, bounds: vec![10, 100, PRIME_BOUND] });
            e
        }
        "ex-3.5" => {
            let mut e = example(
                "ex-3.5",
                "pointwise limit of x^n",
                "f_n = x^n on [0, 1], 1 on (1, 2] are uniformly continuous; the pointwise limit jumps at 1 and \
                 is not symmetrically continuous there",
            );
            let ambient = interval(IntervalPiece::closed(int(0), int(2)));
            let below = interval(IntervalPiece::closed(int(0), int(1)));
            let above = interval(IntervalPiece::new(Some(int(1)), Some(int(2)), false, true));
            let member =
                |n: u32| pieces(vec![(below.clone(), Formula::Monomial(n)), (above.clone(), Formula::Const(int(1)))]);
            let limit = pieces(vec![
                (interval(IntervalPiece::new(Some(int(0)), Some(int(1)), true, false)), Formula::Const(int(0))),
                (interval(IntervalPiece::closed(int(1), int(2))), Formula::Const(int(1))),
            ]);
            for n in [2, 8] {
                e.subjects.push(subject(&format!("f_{n}"), ambient.clone(), member(n), &[(UC, Proven), (USC, Proven)]));
            }
            e.subjects.push(subject(
                "limit f",
                ambient.clone(),
                limit.clone(),
                &[(SC, Refuted), (C, Refuted), (USC, Refuted), (UC, Refuted)],
            ));
            e.checks.push(ExtraCheck::OneSidedJump {
                function: limit.clone(),
                at: int(1),
                left: int(0),
                right: int(1),
            });
            e.checks.push(ExtraCheck::PointwiseLimit {
                members: [1, 2, 4, 8, 16, 32, 64].into_iter().map(member).collect(),
                limit,
                ambient,
            });
            e
        }
        "ex-3.6" => {
            let mut e = example(
                "ex-3.6",
                "integers",
                "any function on a uniformly discrete set is uniformly symmetrically continuous; here a seeded \
                 pseudo-random function on an integer window",
            );
            e.parameters.insert("seed".into(), seed.to_string());
            e.parameters.insert("window".into(), format!("[-{INTEGER_WINDOW}, {INTEGER_WINDOW}]"));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut by_value: BTreeMap<QuadExt, Vec<QuadExt>> = BTreeMap::new();
            for k in -INTEGER_WINDOW..=INTEGER_WINDOW {
                let v = q(rng.gen_range(-100..=100), rng.gen_range(1..=6));
                by_value.entry(v).or_default().push(int(k));
            }
            let f = pieces(
                by_value.into_iter().map(|(v, pts)| (DomainSpec::FinitePoints(pts), Formula::Const(v))).collect(),
            );
            e.subjects.push(subject(
                "random f",
                DomainSpec::IntegerWindow { lo: -INTEGER_WINDOW, hi: INTEGER_WINDOW },
                f,
                &[(USC, Proven), (UC, Proven), (C, Proven), (SC, Proven)],
            ));
            e
        }
        "ex-3.7" => {
            let mut e = example(
                "ex-3.7",
                "1/x with respect to the integers",
                "f = 1/x (f(0) = 0) restricted to Z is uniformly symmetrically continuous, but f is not uniformly \
                 symmetrically continuous with respect to Z: the pair (1/n, -1/n) is centred at 0. The line is \
                 modelled by the rationals in [-2, 2] with denominator at most 64",
            );
            let b = DomainSpec::IntegerWindow { lo: -2, hi: 2 };
            let ambient = DomainSpec::TruncatedRationals {
                max_den: 64,
                lo: Rational::from_integer(-2),
                hi: Rational::from_integer(2),
                adjoin_sqrt2: false,
            };
            let mut s = subject("f wrt B", ambient, reciprocal_with_zero(), &[(Notion::UscWrtB, Refuted)]);
            s.centers = Some(b.clone());
            s.witnesses.push(seq(
                Notion::UscWrtB,
                "x = 1/n, y = -1/n, centre 0, |f(x) - f(y)| = 2n",
                (1..=64).map(|n: i64| term(n as u64, q(1, n), q(-1, n), int(2 * n))).collect(),
            ));
            e.subjects.push(s);
            e.subjects.push(subject("f on B", b, reciprocal_with_zero(), &[(USC, Proven)]));
            e
        }
        "ex-3.8" => {
            let mut e = example(
                "ex-3.8",
                "staircase A",
                "step function on blocks whose cross-block midpoints fall in the gaps: continuous, not uniformly \
                 continuous; uniform symmetric continuity on the infinite staircase is asserted, and checked here \
                 through the proof inequalities and a zero symmetric modulus on the finite model",
            );
            e.parameters.insert("blocks".into(), STAIRCASE_BLOCKS.to_string());
            let params = StaircaseParams { variant: StaircaseVariant::A, blocks: STAIRCASE_BLOCKS };
            let stair = build_staircase(&params)?;
            let mut s = subject(
                "step f",
                DomainSpec::Staircase(params),
                step_function(&stair),
                &[(C, Proven), (SC, Proven), (UC, Refuted), (USC, ProvenOnTruncation)],
            );
            s.grid_exponent = Some(4);
            s.witnesses.push(seq(
                UC,
                "x = a(4n-1), y = a(4n-2), |x - y| = 1/n, |f(x) - f(y)| = 2",
                (1..=(STAIRCASE_BLOCKS / 2))
                    .map(|n| {
                        let x = QuadExt::from_rational(stair.a(4 * n - 1).clone());
                        let y = QuadExt::from_rational(stair.a(4 * n - 2).clone());
                        term(n as u64, x, y, int(2))
                    })
                    .collect(),
            ));
            e.subjects.push(s);
            e.checks.push(ExtraCheck::StaircaseProof { blocks: STAIRCASE_BLOCKS });
            e
        }
        "ex-3.9" => {
            let mut e = example(
                "ex-3.9",
                "staircase B",
                "with a(n) = a(n-1) + 1/(n-1) the midpoint of (a(2n-1), a(2n+1)) lies in [a(2n-1), a(2n)], so the \
                 step function is not uniformly symmetrically continuous",
            );
            e.parameters.insert("blocks".into(), STAIRCASE_BLOCKS.to_string());
            let params = StaircaseParams { variant: StaircaseVariant::B, blocks: STAIRCASE_BLOCKS };
            let stair = build_staircase(&params)?;
            let mut s = subject(
                "step f",
                DomainSpec::Staircase(params),
                step_function(&stair),
                &[(C, Proven), (SC, Proven), (UC, Refuted), (USC, Refuted)],
            );
            s.grid_exponent = Some(4);
            s.witnesses.push(seq(
                UC,
                "x = a(2n+1), y = a(2n), |x - y| = 1/(2n), |f(x) - f(y)| = 2",
                (1..STAIRCASE_BLOCKS)
                    .map(|n| {
                        let x = QuadExt::from_rational(stair.a(2 * n + 1).clone());
                        let y = QuadExt::from_rational(stair.a(2 * n).clone());
                        term(n as u64, x, y, int(2))
                    })
                    .collect(),
            ));
            s.witnesses.push(seq(
                USC,
                "x = a(2n-1), y = a(2n+1), midpoint in [a(2n-1), a(2n)], |f(x) - f(y)| = 2",
                (1..STAIRCASE_BLOCKS)
                    .map(|n| {
                        let x = QuadExt::from_rational(stair.a(2 * n - 1).clone());
                        let y = QuadExt::from_rational(stair.a(2 * n + 1).clone());
                        term(n as u64, x, y, int(2))
                    })
                    .collect(),
            ));
            e.subjects.push(s);
            e.checks.push(ExtraCheck::StaircaseWitness { terms: STAIRCASE_BLOCKS });
            e
        }
        "ex-4.3" => {
            let mut e = example(
                "ex-4.3",
                "glued intervals",
                "f on [0,1] U [2,3] is uniformly continuous (positive gap); g = 1 on (0,1), 2 on (1,2) is not, \
                 since d((0,1), (1,2)) = 0",
            );
            let left = IntervalPiece::closed(int(0), int(1));
            let right = IntervalPiece::closed(int(2), int(3));
            let f = pieces(vec![
                (interval(left.clone()), Formula::Identity),
                (interval(right.clone()), Formula::Affine { m: int(1), c: int(-2) }),
            ]);
            e.subjects.push(subject(
                "f",
                DomainSpec::IntervalUnion(vec![left, right]),
                f,
                &[(UC, Proven), (USC, Proven), (C, Proven), (SC, Proven)],
            ));
            let (l, r) = (IntervalPiece::open(int(0), int(1)), IntervalPiece::open(int(1), int(2)));
            let g = pieces(vec![
                (interval(l.clone()), Formula::Const(int(1))),
                (interval(r.clone()), Formula::Const(int(2))),
            ]);
            let mut s = subject(
                "g",
                DomainSpec::IntervalUnion(vec![l, r]),
                g,
                &[(UC, Refuted), (USC, Refuted), (C, Proven), (SC, Proven)],
            );
            s.witnesses.push(seq(
                UC,
                "x = 1 + 1/(n+1), y = 1 - 1/(n+1), |g(x) - g(y)| = 1",
                (1..=64).map(|n: i64| term(n as u64, &int(1) + &q(1, n + 1), &int(1) - &q(1, n + 1), int(1))).collect(),
            ));
            e.subjects.push(s);
            e
        }
        other => return Err(Error::UnknownExample(other.into())),
    };
    Ok(ex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_follow_the_chain() {
        for id in EXAMPLE_IDS {
            let ex = build_example(id, 0).unwrap();
            assert!(ex.inconsistencies().is_empty(), "{id}: {:?}", ex.inconsistencies());
        }
    }

    #[test]
    fn unknown_id() {
        assert_eq!(build_example("bogus", 0).unwrap_err(), Error::UnknownExample("bogus".into()));
    }
}
