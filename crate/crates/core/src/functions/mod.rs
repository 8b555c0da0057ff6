//! Piecewise-defined and combined functions with exact evaluation.

mod atoms;
mod formula;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::domains::{Domain, DomainKind, DomainSpec, IntervalPiece};
use crate::error::Error;
use crate::exactnum::QuadExt;

pub use atoms::{interval_atoms, Atom};
pub use formula::Formula;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub region: DomainSpec,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum CombineOp {
    Scale(QuadExt),
    Add,
    Sub,
    Mul,
    Div,
}

impl CombineOp {
    fn arity(&self) -> usize {
        match self {
            CombineOp::Scale(_) => 1,
            _ => 2,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CombineOp::Scale(_) => "scale",
            CombineOp::Add => "add",
            CombineOp::Sub => "sub",
            CombineOp::Mul => "mul",
            CombineOp::Div => "div",
        }
    }

    fn apply(&self, args: &[QuadExt]) -> Option<QuadExt> {
        Some(match self {
            CombineOp::Scale(k) => k * &args[0],
            CombineOp::Add => &args[0] + &args[1],
            CombineOp::Sub => &args[0] - &args[1],
            CombineOp::Mul => &args[0] * &args[1],
            CombineOp::Div => args[0].checked_div(&args[1])?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum FuncSpec {
    /// Regions are expected to be pairwise disjoint and to cover the domain
    /// the function is analysed on.
    Piecewise(Vec<Piece>),
    Combined {
        op: CombineOp,
        operands: Vec<FuncSpec>,
    },
}

impl FuncSpec {
    pub fn single(region: DomainSpec, formula: Formula) -> Self {
        FuncSpec::Piecewise(vec![Piece { region, formula }])
    }

    pub fn compile(&self) -> Result<Function, Error> {
        Function::compile(self)
    }

    /// Finite endpoints and isolated points of every region, recursively.
    pub fn breakpoints(&self) -> Vec<QuadExt> {
        let mut out = Vec::new();
        collect_breakpoints(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

fn collect_breakpoints(f: &FuncSpec, out: &mut Vec<QuadExt>) {
    match f {
        FuncSpec::Piecewise(pieces) => {
            for p in pieces {
                region_landmarks(&p.region, out);
            }
        }
        FuncSpec::Combined { operands, .. } => operands.iter().for_each(|g| collect_breakpoints(g, out)),
    }
}

fn region_landmarks(d: &DomainSpec, out: &mut Vec<QuadExt>) {
    match d {
        DomainSpec::IntervalUnion(pieces) => {
            for p in pieces {
                out.extend(p.lo.iter().cloned());
                out.extend(p.hi.iter().cloned());
            }
        }
        DomainSpec::Staircase(params) => {
            if let Ok(st) = crate::domains::build_staircase(params) {
                out.extend(st.breakpoints.into_iter().map(QuadExt::from_rational));
            }
        }
        DomainSpec::FinitePoints(pts) => out.extend(pts.iter().cloned()),
        DomainSpec::IntegerWindow { lo, hi } if hi - lo <= 10_000 => out.extend((*lo..=*hi).map(QuadExt::int)),
        DomainSpec::UnionOf(parts) => parts.iter().for_each(|p| region_landmarks(p, out)),
        _ => {}
    }
}

/// Compiled function with indexed piece lookup.
#[derive(Debug, Clone)]
pub struct Function {
    spec: FuncSpec,
    node: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Piecewise {
        formulas: Vec<Formula>,
        regions: Vec<Domain>,
        points: HashMap<QuadExt, usize>,
        // sorted by left end, disjoint
        intervals: Vec<(IntervalPiece, usize)>,
        others: Vec<usize>,
    },
    Combined {
        op: CombineOp,
        operands: Vec<Function>,
    },
}

impl Function {
    pub fn compile(spec: &FuncSpec) -> Result<Function, Error> {
        let node = match spec {
            FuncSpec::Piecewise(pieces) => {
                let mut formulas = Vec::new();
                let mut regions = Vec::new();
                let mut points = HashMap::new();
                let mut intervals = Vec::new();
                let mut others = Vec::new();
                for (i, p) in pieces.iter().enumerate() {
                    let d = Domain::compile(&p.region)?;
                    index_region(&d, i, &mut points, &mut intervals, &mut others)?;
                    formulas.push(p.formula.clone());
                    regions.push(d);
                }
                intervals.sort_by(|a, b| a.0.order_key_cmp(&b.0));
                let bare: Vec<IntervalPiece> = intervals.iter().map(|(p, _)| p.clone()).collect();
                if let Err(Error::OverlappingIntervals { first, second }) =
                    crate::domains::merge_interval_components(&bare)
                {
                    let (a, b) = (intervals[first].1, intervals[second].1);
                    return Err(Error::OverlappingPieces {
                        first: a.min(b),
                        second: a.max(b),
                        point: format!("{} and {}", intervals[first].0, intervals[second].0),
                    });
                }
                Node::Piecewise { formulas, regions, points, intervals, others }
            }
            FuncSpec::Combined { op, operands } => {
                if operands.len() != op.arity() {
                    return Err(Error::Arity {
                        op: op.name().into(),
                        expected: op.arity().to_string(),
                        got: operands.len(),
                    });
                }
                Node::Combined {
                    op: op.clone(),
                    operands: operands.iter().map(Function::compile).collect::<Result<_, _>>()?,
                }
            }
        };
        Ok(Function { spec: spec.clone(), node })
    }

    pub fn spec(&self) -> &FuncSpec {
        &self.spec
    }

    /// Index of the first piece whose region contains `x`.
    fn lookup(&self, x: &QuadExt) -> Option<usize> {
        let Node::Piecewise { regions, points, intervals, others, .. } = &self.node else {
            return None;
        };
        if let Some(&i) = points.get(x) {
            return Some(i);
        }
        if !intervals.is_empty() {
            let idx = intervals.partition_point(|(p, _)| p.lo.as_ref().is_none_or(|lo| lo <= x));
            if let Some((_, i)) = intervals[..idx].iter().rev().take(3).find(|(p, _)| p.contains(x)) {
                return Some(*i);
            }
        }
        others.iter().copied().find(|&i| regions[i].contains(x))
    }

    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt, Error> {
        match &self.node {
            Node::Piecewise { formulas, .. } => {
                let i = self.lookup(x).ok_or_else(|| Error::Uncovered { point: x.to_string() })?;
                formulas[i].eval(x)
            }
            Node::Combined { op, operands } => {
                let args = operands.iter().map(|g| g.eval(x)).collect::<Result<Vec<_>, _>>()?;
                op.apply(&args).ok_or_else(|| Error::Eval { point: x.to_string(), reason: "division by zero".into() })
            }
        }
    }

    /// Exactly one piece must govern `x` (recursively for combinations).
    pub fn check_covered(&self, x: &QuadExt) -> Result<(), Error> {
        match &self.node {
            Node::Piecewise { regions, points, intervals, others, .. } => {
                let mut hits: Vec<usize> = Vec::new();
                if let Some(&i) = points.get(x) {
                    hits.push(i);
                }
                let idx = intervals.partition_point(|(p, _)| p.lo.as_ref().is_none_or(|lo| lo <= x));
                hits.extend(intervals[..idx].iter().rev().take(3).filter(|(p, _)| p.contains(x)).map(|(_, i)| *i));
                hits.extend(others.iter().copied().filter(|&i| regions[i].contains(x)));
                hits.sort_unstable();
                hits.dedup();
                match hits.len() {
                    0 => Err(Error::Uncovered { point: x.to_string() }),
                    1 => Ok(()),
                    _ => Err(Error::OverlappingPieces { first: hits[0], second: hits[1], point: x.to_string() }),
                }
            }
            Node::Combined { operands, .. } => operands.iter().try_for_each(|g| g.check_covered(x)),
        }
    }

    /// All regions, recursively, are unions of intervals or finite point sets,
    /// so the function is a single formula between consecutive breakpoints.
    pub fn is_interval_piecewise(&self) -> bool {
        match &self.node {
            Node::Piecewise { others, regions, .. } => others
                .iter()
                .all(|&i| matches!(regions[i].kind(), DomainKind::Integers { lo, hi } if hi - lo <= 10_000)),
            Node::Combined { operands, .. } => operands.iter().all(|g| g.is_interval_piecewise()),
        }
    }

    pub fn one_sided_limits(&self, a: &QuadExt) -> OneSidedLimits {
        match &self.node {
            Node::Piecewise { formulas, regions, .. } => {
                let side = |left: bool| {
                    for (i, d) in regions.iter().enumerate() {
                        let adjacent = d.interval_pieces().iter().any(|p| {
                            if left {
                                p.lo.as_ref().is_none_or(|lo| lo < a) && p.hi.as_ref().is_none_or(|hi| hi >= a)
                            } else {
                                p.lo.as_ref().is_none_or(|lo| lo <= a) && p.hi.as_ref().is_none_or(|hi| hi > a)
                            }
                        });
                        if adjacent {
                            return match formulas[i].limit_at(a) {
                                Some(v) => SideLimit::Value(v),
                                None => SideLimit::Diverges,
                            };
                        }
                    }
                    SideLimit::Absent
                };
                OneSidedLimits { left: side(true), right: side(false) }
            }
            Node::Combined { op, operands } => {
                let parts: Vec<OneSidedLimits> = operands.iter().map(|g| g.one_sided_limits(a)).collect();
                let fold = |pick: fn(&OneSidedLimits) -> &SideLimit| {
                    let mut vals = Vec::new();
                    for p in &parts {
                        match pick(p) {
                            SideLimit::Value(v) => vals.push(v.clone()),
                            other => return other.clone(),
                        }
                    }
                    match op.apply(&vals) {
                        Some(v) => SideLimit::Value(v),
                        None => SideLimit::Diverges,
                    }
                };
                OneSidedLimits { left: fold(|l| &l.left), right: fold(|l| &l.right) }
            }
        }
    }
}

fn index_region(
    d: &Domain,
    i: usize,
    points: &mut HashMap<QuadExt, usize>,
    intervals: &mut Vec<(IntervalPiece, usize)>,
    others: &mut Vec<usize>,
) -> Result<(), Error> {
    match d.kind() {
        DomainKind::Points { sorted, .. } => {
            for x in sorted {
                if let Some(prev) = points.insert(x.clone(), i) {
                    return Err(Error::OverlappingPieces { first: prev, second: i, point: x.to_string() });
                }
            }
        }
        DomainKind::Intervals { pieces, .. } => {
            for p in pieces {
                intervals.push((p.clone(), i));
            }
        }
        DomainKind::Union(parts) => {
            for part in parts {
                index_region(part, i, points, intervals, others)?;
            }
        }
        _ => {
            if !others.contains(&i) {
                others.push(i);
            }
        }
    }
    Ok(())
}

/// Limit of a function at a point from one side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SideLimit {
    Value(QuadExt),
    /// No piece reaches the point from this side.
    Absent,
    /// The governing formula has no finite limit here.
    Diverges,
}

impl SideLimit {
    pub fn value(&self) -> Option<&QuadExt> {
        match self {
            SideLimit::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSidedLimits {
    pub left: SideLimit,
    pub right: SideLimit,
}

pub fn evaluate(f: &FuncSpec, x: &QuadExt) -> Result<QuadExt, Error> {
    f.compile()?.eval(x)
}

/// Build `op(operands...)`, checking arity.
pub fn combine(op: CombineOp, operands: Vec<FuncSpec>) -> Result<FuncSpec, Error> {
    if operands.len() != op.arity() {
        return Err(Error::Arity { op: op.name().into(), expected: op.arity().to_string(), got: operands.len() });
    }
    Ok(FuncSpec::Combined { op, operands })
}

pub fn one_sided_limits(f: &FuncSpec, a: &QuadExt) -> Result<OneSidedLimits, Error> {
    Ok(f.compile()?.one_sided_limits(a))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness {
    pub point: QuadExt,
    pub value: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bounded: bool,
    /// Supremum of `|f|` over the inspected set.
    pub bound: Option<QuadExt>,
    /// Point where the bound is attained (or approached, at an open end).
    pub witness: Option<BoundWitness>,
    /// Only part of the set was inspected, or the set is a finite model.
    pub truncated: bool,
}

/// Supremum of `|f|` on `d`: exact over enumerable sets, analytic over
/// interval unions when the function flattens to formulas per interval.
pub fn bounded_on(f: &FuncSpec, d: &DomainSpec, limit: usize) -> Result<BoundReport, Error> {
    let func = f.compile()?;
    let dom = d.compile()?;
    let mut best: Option<BoundWitness> = None;
    let consider = |point: QuadExt, value: QuadExt, best: &mut Option<BoundWitness>| {
        if best.as_ref().is_none_or(|b| value.abs() > b.value.abs()) {
            *best = Some(BoundWitness { point, value });
        }
    };
    if dom.is_enumerable() {
        let en = dom.enumerate(limit)?;
        for x in en.points {
            let v = func.eval(&x)?;
            consider(x, v, &mut best);
        }
        return Ok(BoundReport {
            bounded: true,
            bound: best.as_ref().map(|b| b.value.abs()),
            witness: best,
            truncated: en.truncated || dom.is_model(),
        });
    }
    let pieces = dom.interval_pieces();
    let Some(atoms) = interval_atoms(f, &pieces)? else {
        return Err(Error::Inapplicable("function does not reduce to formulas on intervals".into()));
    };
    for atom in &atoms {
        let (lo, hi) = (atom.piece.lo.as_ref(), atom.piece.hi.as_ref());
        let unbounded = match &atom.formula {
            Formula::Const(_) => false,
            Formula::Reciprocal => lo.is_some_and(|x| x.is_zero()) || hi.is_some_and(|x| x.is_zero()),
            _ => lo.is_none() || hi.is_none(),
        };
        if unbounded {
            return Ok(BoundReport { bounded: false, bound: None, witness: None, truncated: false });
        }
        // |formula| is monotone between breakpoints of the listed kinds, so
        // its supremum over an atom is reached at an end of the closure
        let ends: Vec<QuadExt> = match &atom.formula {
            Formula::Const(_) => vec![lo.or(hi).cloned().unwrap_or_default()],
            _ => lo.into_iter().chain(hi).cloned().collect(),
        };
        for e in ends {
            let v = atom.formula.eval(&e)?;
            consider(e, v, &mut best);
        }
    }
    if let DomainKind::Union(parts) = dom.kind() {
        for part in parts.iter().filter(|p| p.is_enumerable()) {
            for x in part.enumerate(limit)?.points {
                let v = func.eval(&x)?;
                consider(x, v, &mut best);
            }
        }
    }
    Ok(BoundReport {
        bounded: true,
        bound: best.as_ref().map(|b| b.value.abs()),
        witness: best,
        truncated: dom.is_model(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    fn interval(lo: &str, hi: &str, lc: bool, hc: bool) -> IntervalPiece {
        IntervalPiece { lo: Some(q(lo)), hi: Some(q(hi)), lo_closed: lc, hi_closed: hc }
    }

    #[test]
    fn uncovered_point_is_domain_error() {
        let f = FuncSpec::single(DomainSpec::IntervalUnion(vec![interval("0", "1", true, true)]), Formula::Identity);
        assert!(matches!(evaluate(&f, &q("2")), Err(Error::Uncovered { .. })));
        assert_eq!(evaluate(&f, &q("1/2")).unwrap(), q("1/2"));
    }

    #[test]
    fn combine_checks_arity() {
        let f = FuncSpec::single(DomainSpec::IntegerWindow { lo: 0, hi: 3 }, Formula::Identity);
        assert!(matches!(combine(CombineOp::Add, vec![f.clone()]), Err(Error::Arity { .. })));
        let g = combine(CombineOp::Div, vec![f.clone(), f]).unwrap();
        assert!(matches!(evaluate(&g, &q("0")), Err(Error::Eval { .. })));
        assert_eq!(evaluate(&g, &q("2")).unwrap(), q("1"));
    }

    #[test]
    fn limits_of_step() {
        let f = FuncSpec::Piecewise(vec![
            Piece {
                region: DomainSpec::IntervalUnion(vec![interval("0", "1", true, false)]),
                formula: Formula::Const(q("0")),
            },
            Piece {
                region: DomainSpec::IntervalUnion(vec![interval("1", "2", true, true)]),
                formula: Formula::Const(q("1")),
            },
        ]);
        let l = one_sided_limits(&f, &q("1")).unwrap();
        assert_eq!(l.left, SideLimit::Value(q("0")));
        assert_eq!(l.right, SideLimit::Value(q("1")));
        let l = one_sided_limits(&f, &q("2")).unwrap();
        assert_eq!(l.right, SideLimit::Absent);
    }

    #[test]
    fn bound_of_prime_map() {
        let f = FuncSpec::Piecewise(vec![
            Piece {
                region: DomainSpec::OddPrimeReciprocals { max_prime: 100, with_zero: false },
                formula: Formula::Reciprocal,
            },
            Piece { region: DomainSpec::FinitePoints(vec![q("0")]), formula: Formula::Const(q("0")) },
        ]);
        let r = bounded_on(&f, &DomainSpec::OddPrimeReciprocals { max_prime: 100, with_zero: true }, 1000).unwrap();
        assert_eq!(r.bound, Some(q("97")));
        assert_eq!(r.witness.unwrap().point, q("1/97"));
        assert!(r.truncated);
    }
}
