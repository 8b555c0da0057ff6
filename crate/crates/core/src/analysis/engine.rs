//! Sampling and oscillation sweeps shared by the classifier and the suites.

use std::collections::{BTreeMap, HashMap};

use super::config::AnalysisConfig;
use super::verdict::{
    Certificate, ModulusEntry, ModulusKind, ModulusProfile, PairRecord, RefutationBasis, Resolution, Status, Witness,
    WitnessTerm,
};
use crate::domains::{Domain, DomainKind, IntervalPiece};
use crate::error::Error;
use crate::exactnum::{midpoint, QuadExt, Rational};
use crate::functions::Function;

/// Points at which the function is inspected, with their values.
#[derive(Debug, Clone)]
pub(crate) struct Sample {
    pub points: Vec<QuadExt>,
    pub values: Vec<QuadExt>,
    /// `points` lists every member of the domain.
    pub exhaustive: bool,
    /// An enumeration cap was hit.
    pub truncated: bool,
    pub discrete: bool,
    /// Interval ends and function breakpoints inside the domain.
    pub landmarks: Vec<QuadExt>,
}

impl Sample {
    pub fn build(ambient: &Domain, f: &Function, cfg: &AnalysisConfig, eff: &[QuadExt]) -> Result<Sample, Error> {
        if ambient.is_enumerable() {
            let en = ambient.enumerate(cfg.enum_limit)?;
            let values = evaluate_all(f, &en.points)?;
            return Ok(Sample {
                exhaustive: !en.truncated,
                truncated: en.truncated,
                discrete: true,
                landmarks: Vec::new(),
                points: en.points,
                values,
            });
        }
        let mut pts: Vec<QuadExt> = Vec::new();
        let mut truncated = false;
        let pieces = ambient.interval_pieces();
        for p in &pieces {
            grid_points(p, cfg.grid_exponent, &mut pts);
            approach_points(p, &mut pts);
        }
        enumerable_parts(ambient, cfg.enum_limit, &mut pts, &mut truncated)?;
        let mut landmarks: Vec<QuadExt> = pieces.iter().flat_map(|p| p.lo.iter().chain(p.hi.iter()).cloned()).collect();
        landmarks.extend(f.spec().breakpoints());
        landmarks.sort();
        landmarks.dedup();
        for e in &landmarks {
            for d in eff {
                let q = d.half().half();
                let e8 = q.half();
                for off in [&q, &e8] {
                    pts.push(e + off);
                    pts.push(e - off);
                }
            }
        }
        pts.extend(landmarks.iter().cloned());
        pts.retain(|x| ambient.contains(x));
        pts.sort();
        pts.dedup();
        landmarks.retain(|x| ambient.contains(x));
        let values = evaluate_all(f, &pts)?;
        Ok(Sample { points: pts, values, exhaustive: false, truncated, discrete: false, landmarks })
    }
}

fn enumerable_parts(d: &Domain, limit: usize, out: &mut Vec<QuadExt>, truncated: &mut bool) -> Result<(), Error> {
    match d.kind() {
        DomainKind::Union(parts) => {
            for p in parts {
                enumerable_parts(p, limit, out, truncated)?;
            }
        }
        DomainKind::Intervals { pieces, .. } => {
            out.extend(pieces.iter().filter(|p| p.is_degenerate()).filter_map(|p| p.lo.clone()));
        }
        _ => {
            let en = d.enumerate(limit)?;
            *truncated |= en.truncated;
            out.extend(en.points);
        }
    }
    Ok(())
}

pub(crate) fn evaluate_all(f: &Function, pts: &[QuadExt]) -> Result<Vec<QuadExt>, Error> {
    pts.iter()
        .map(|x| {
            f.check_covered(x)?;
            f.eval(x)
        })
        .collect()
}

fn pow2(k: u32) -> QuadExt {
    QuadExt::from_rational(Rational::from_integer(1i64 << k.min(62)))
}

/// `2^k + 1` equally spaced points; unbounded ends are replaced by a window
/// of width `2^(k/2)` plus geometrically spaced far points.
pub(crate) fn grid_points(p: &IntervalPiece, k: u32, out: &mut Vec<QuadExt>) {
    let n = 1i64 << k;
    let w = pow2(k / 2);
    let (lo, hi) = match (&p.lo, &p.hi) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        (Some(a), None) => (a.clone(), a + &w),
        (None, Some(b)) => (b - &w, b.clone()),
        (None, None) => (-&w, w.clone()),
    };
    let step = (&hi - &lo).scale(&Rational::new(1, n));
    let mut x = lo;
    for _ in 0..=n {
        out.push(x.clone());
        x = &x + &step;
    }
    let anchor = p.lo.clone().or_else(|| p.hi.clone()).unwrap_or_default();
    let mut far = QuadExt::one();
    for _ in 0..=2 * k {
        if p.hi.is_none() {
            out.push(&anchor + &far);
        }
        if p.lo.is_none() {
            out.push(&anchor - &far);
        }
        far = &far + &far;
    }
}

/// Points approaching open ends at offsets `2^-m * len`, `m = 1..=10`.
fn approach_points(p: &IntervalPiece, out: &mut Vec<QuadExt>) {
    let len = p.length().unwrap_or_else(QuadExt::one);
    let mut off = len.half();
    for _ in 1..=10 {
        if let (Some(lo), false) = (&p.lo, p.lo_closed) {
            out.push(lo + &off);
        }
        if let (Some(hi), false) = (&p.hi, p.hi_closed) {
            out.push(hi - &off);
        }
        off = off.half();
    }
}

/// Best candidate pair at one scale: maximal oscillation, then smallest
/// separation, then lexicographic `(x, y)`.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub sep: QuadExt,
    pub x: QuadExt,
    pub y: QuadExt,
    pub center: Option<QuadExt>,
    pub osc: QuadExt,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        self.osc
            .cmp(&other.osc)
            .then_with(|| other.sep.cmp(&self.sep))
            .then_with(|| other.x.cmp(&self.x))
            .then_with(|| other.y.cmp(&self.y))
            .is_gt()
    }

    fn record(&self) -> PairRecord {
        PairRecord { x: self.x.clone(), y: self.y.clone(), center: self.center.clone(), oscillation: self.osc.clone() }
    }
}

/// Keeps the best candidate per separation value.
#[derive(Debug, Default)]
pub(crate) struct Buckets {
    best: BTreeMap<QuadExt, Candidate>,
}

impl Buckets {
    pub fn offer(&mut self, c: Candidate) {
        match self.best.get_mut(&c.sep) {
            Some(cur) => {
                if c.beats(cur) {
                    *cur = c;
                }
            }
            None => {
                self.best.insert(c.sep.clone(), c);
            }
        }
    }

    /// `max` over candidates with `sep < delta`, for each `delta`.
    pub fn sweep(&self, schedule: &[QuadExt]) -> Vec<Option<Candidate>> {
        let mut order: Vec<usize> = (0..schedule.len()).collect();
        order.sort_by(|&a, &b| schedule[a].cmp(&schedule[b]));
        let mut out = vec![None; schedule.len()];
        let mut it = self.best.values().peekable();
        let mut running: Option<Candidate> = None;
        for i in order {
            while let Some(c) = it.peek() {
                if c.sep >= schedule[i] {
                    break;
                }
                if running.as_ref().is_none_or(|r| c.beats(r)) {
                    running = Some((*c).clone());
                }
                it.next();
            }
            out[i] = running.clone();
        }
        out
    }
}

/// Sliding-window sweep of `sup |f(x) - f(y)|` over sample pairs with
/// `|x - y| < delta`, one entry per delta.
pub(crate) fn uc_sweep(s: &Sample, schedule: &[QuadExt]) -> Vec<Option<Candidate>> {
    let n = s.points.len();
    let mut by_value: HashMap<&QuadExt, Vec<usize>> = HashMap::new();
    for (i, v) in s.values.iter().enumerate() {
        by_value.entry(v).or_default().push(i);
    }
    schedule
        .iter()
        .map(|delta| {
            let mut maxq: std::collections::VecDeque<usize> = Default::default();
            let mut minq: std::collections::VecDeque<usize> = Default::default();
            let mut left = 0usize;
            let mut best = QuadExt::zero();
            for i in 0..n {
                while &s.points[i] - &s.points[left] >= *delta {
                    left += 1;
                }
                for q in [&mut maxq, &mut minq] {
                    while q.front().is_some_and(|&j| j < left) {
                        q.pop_front();
                    }
                }
                if let Some(&j) = maxq.front() {
                    let d = &s.values[j] - &s.values[i];
                    if d > best {
                        best = d;
                    }
                }
                if let Some(&j) = minq.front() {
                    let d = &s.values[i] - &s.values[j];
                    if d > best {
                        best = d;
                    }
                }
                while maxq.back().is_some_and(|&j| s.values[j] <= s.values[i]) {
                    maxq.pop_back();
                }
                maxq.push_back(i);
                while minq.back().is_some_and(|&j| s.values[j] >= s.values[i]) {
                    minq.pop_back();
                }
                minq.push_back(i);
            }
            if best.is_zero() {
                return None;
            }
            // canonical pair: nearest partner at the target value
            let mut win: Option<Candidate> = None;
            for i in 0..n {
                for target in [&s.values[i] + &best, &s.values[i] - &best] {
                    let Some(pos) = by_value.get(&target) else {
                        continue;
                    };
                    let k = pos.partition_point(|&j| j < i);
                    if k == 0 {
                        continue;
                    }
                    let j = pos[k - 1];
                    let sep = &s.points[i] - &s.points[j];
                    if sep >= *delta {
                        continue;
                    }
                    let c = Candidate {
                        sep,
                        x: s.points[i].clone(),
                        y: s.points[j].clone(),
                        center: None,
                        osc: best.clone(),
                    };
                    if win.as_ref().is_none_or(|w| c.beats(w)) {
                        win = Some(c);
                    }
                }
            }
            win
        })
        .collect()
}

/// Symmetric pairs of a discrete sample with positive oscillation.
#[derive(Debug, Default)]
pub(crate) struct DiscretePairs {
    pub pairs: Vec<Candidate>,
    pub examined: u64,
    pub truncated: bool,
}

/// All symmetric pairs `(x, y)` of the sample with `h < delta_max`, midpoint
/// in `centers` and `f(x) != f(y)`. Picks the cheaper of scanning from
/// enumerated centres or from the points outside the dominant value class.
pub(crate) fn discrete_pairs(
    s: &Sample,
    centers: &Domain,
    center_list: Option<&[QuadExt]>,
    delta_max: &QuadExt,
    budget: usize,
) -> DiscretePairs {
    let n = s.points.len();
    let mut out = DiscretePairs::default();
    let two = delta_max + delta_max;
    let mut class_size: HashMap<&QuadExt, usize> = HashMap::new();
    for v in &s.values {
        *class_size.entry(v).or_default() += 1;
    }
    if class_size.len() <= 1 {
        return out;
    }
    let dominant = class_size.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))).map(|(v, _)| (*v).clone());
    let dominant = dominant.unwrap_or_default();
    let pivots = n - class_size[&dominant];
    let push = |out: &mut DiscretePairs, i: usize, j: usize, c: QuadExt| {
        let osc = (&s.values[i] - &s.values[j]).abs();
        if !osc.is_zero() {
            out.pairs.push(Candidate {
                sep: (&s.points[i] - &s.points[j]).half(),
                x: s.points[i].clone(),
                y: s.points[j].clone(),
                center: Some(c),
                osc,
            });
        }
    };
    match center_list {
        Some(cl) if cl.len() < 2 * pivots => {
            let index: HashMap<&QuadExt, usize> = s.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
            for c in cl {
                let start = s.points.partition_point(|p| p <= c);
                for i in start..n {
                    if &s.points[i] - c >= *delta_max {
                        break;
                    }
                    if out.examined as usize >= budget {
                        out.truncated = true;
                        return out;
                    }
                    out.examined += 1;
                    let y = &(c + c) - &s.points[i];
                    if let Some(&j) = index.get(&y) {
                        push(&mut out, i, j, c.clone());
                    }
                }
            }
        }
        _ => {
            for i in 0..n {
                if s.values[i] == dominant {
                    continue;
                }
                // partners on both sides; pairs of two pivots are taken once
                let visit = |j: usize, out: &mut DiscretePairs| -> bool {
                    if s.values[j] != dominant && j < i {
                        return true;
                    }
                    if s.values[j] == s.values[i] {
                        return true;
                    }
                    if out.examined as usize >= budget {
                        out.truncated = true;
                        return false;
                    }
                    out.examined += 1;
                    let c = midpoint(&s.points[i], &s.points[j]);
                    if centers.contains(&c) {
                        let (hi, lo) = if j > i { (j, i) } else { (i, j) };
                        push(out, hi, lo, c);
                    }
                    true
                };
                for j in (0..i).rev() {
                    if &s.points[i] - &s.points[j] >= two {
                        break;
                    }
                    if !visit(j, &mut out) {
                        return out;
                    }
                }
                for j in i + 1..n {
                    if &s.points[j] - &s.points[i] >= two {
                        break;
                    }
                    if !visit(j, &mut out) {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Does any symmetric pair (at any separation) have its midpoint in `centers`?
/// `None` when the budget ran out first. Also returns the pairs examined.
pub(crate) fn has_symmetric_pair(
    s: &Sample,
    centers: &Domain,
    center_list: Option<&[QuadExt]>,
    budget: usize,
) -> (Option<bool>, u64) {
    let mut examined = 0usize;
    let index: std::collections::HashSet<&QuadExt> = s.points.iter().collect();
    match center_list {
        Some(cl) if cl.len() < s.points.len() => {
            for c in cl {
                let start = s.points.partition_point(|p| p <= c);
                for x in &s.points[start..] {
                    if examined >= budget {
                        return (None, examined as u64);
                    }
                    examined += 1;
                    if index.contains(&(&(c + c) - x)) {
                        return (Some(true), examined as u64);
                    }
                }
            }
        }
        _ => {
            for i in 0..s.points.len() {
                for j in 0..i {
                    if examined >= budget {
                        return (None, examined as u64);
                    }
                    examined += 1;
                    if centers.contains(&midpoint(&s.points[i], &s.points[j])) {
                        return (Some(true), examined as u64);
                    }
                }
            }
        }
    }
    (Some(false), examined as u64)
}

/// Pool of symmetric pairs for a sampled continuum: every sample point in
/// `centers` with half-widths `delta/2`, plus pairs of landmarks.
pub(crate) fn sampled_sym_buckets(
    s: &Sample,
    ambient: &Domain,
    centers: &Domain,
    extra_centers: &[QuadExt],
    f: &Function,
    eff: &[QuadExt],
    budget: usize,
) -> Result<(Buckets, u64, bool), Error> {
    let mut b = Buckets::default();
    let mut examined = 0u64;
    let mut truncated = false;
    let halves: Vec<QuadExt> = eff.iter().map(|d| d.half()).collect();
    let mut center_pts: Vec<&QuadExt> = s.points.iter().filter(|c| centers.contains(c)).collect();
    center_pts.extend(extra_centers.iter().filter(|c| ambient.contains(c) || centers.contains(c)));
    center_pts.sort();
    center_pts.dedup();
    'outer: for c in center_pts {
        for h in &halves {
            if examined as usize >= budget {
                truncated = true;
                break 'outer;
            }
            examined += 1;
            let x = c + h;
            let y = c - h;
            if !ambient.contains(&x) || !ambient.contains(&y) {
                continue;
            }
            let osc = (&f.eval(&x)? - &f.eval(&y)?).abs();
            if !osc.is_zero() {
                b.offer(Candidate { sep: h.clone(), x, y, center: Some(c.clone()), osc });
            }
        }
    }
    // pairs with one end at a landmark, so one-sided jumps are seen at every scale
    'lm: for e in &s.landmarks {
        let fe = f.eval(e)?;
        for i in landmark_partners(&s.points, e, eff) {
            let x = &s.points[i];
            let c = midpoint(x, e);
            if !centers.contains(&c) {
                continue;
            }
            if examined as usize >= budget {
                truncated = true;
                break 'lm;
            }
            examined += 1;
            let osc = (&f.eval(x)? - &fe).abs();
            if !osc.is_zero() {
                let (x, y) = if x > e { (x.clone(), e.clone()) } else { (e.clone(), x.clone()) };
                b.offer(Candidate { sep: (&x - &y).half(), x, y, center: Some(c), osc });
            }
        }
    }
    Ok((b, examined, truncated))
}

const LANDMARK_REACH: usize = 4;

/// Indices of sorted `points` paired with landmark `e`: the nearest few on
/// each side, and for every scale `d` the few just inside `|x - e| < 2d`.
pub(crate) fn landmark_partners(points: &[QuadExt], e: &QuadExt, scales: &[QuadExt]) -> Vec<usize> {
    let at = points.partition_point(|p| p < e);
    let past = points.partition_point(|p| p <= e);
    let mut out: Vec<usize> = Vec::new();
    out.extend(at.saturating_sub(LANDMARK_REACH)..at);
    out.extend(past..(past + LANDMARK_REACH).min(points.len()));
    for d in scales {
        let w = d + d;
        let lo = e - &w;
        let hi = e + &w;
        // first index strictly inside on the left, last strictly inside on the right
        let l = points.partition_point(|p| *p <= lo).min(at);
        out.extend(l..(l + LANDMARK_REACH).min(at));
        let r = points.partition_point(|p| *p < hi).max(past);
        out.extend(r.saturating_sub(LANDMARK_REACH).max(past)..r);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Assemble a modulus profile from per-delta winners.
pub(crate) fn profile(
    kind: ModulusKind,
    schedule: &[QuadExt],
    winners: Vec<Option<Candidate>>,
    floor: Option<&QuadExt>,
    exhaustive: bool,
    truncated: bool,
    pairs_examined: u64,
) -> ModulusProfile {
    let entries = schedule
        .iter()
        .zip(winners)
        .map(|(d, w)| ModulusEntry {
            delta: d.clone(),
            oscillation: w.as_ref().map(|c| c.osc.clone()).unwrap_or_default(),
            witness: w.as_ref().map(Candidate::record),
            resolved: floor.is_none_or(|fl| d > fl),
        })
        .collect();
    ModulusProfile { kind, entries, truncated, exhaustive, pairs_examined, floor: floor.cloned() }
}

/// Turn a profile into a verdict.
///
/// Refuted when the oscillation at the finest resolved scale is positive and
/// at least half of the value at the middle resolved scale; proven when an
/// untruncated exhaustive enumeration shows no oscillation at all; otherwise
/// no violation at this resolution.
pub(crate) fn decide(p: &ModulusProfile, exhaustive_points: usize) -> Status {
    let eff: Vec<&ModulusEntry> = p.entries.iter().filter(|e| e.resolved).collect();
    let Some(fine) = eff.last() else {
        return Status::NoViolationAtResolution {
            resolution: Resolution {
                finest_delta: None,
                finest_oscillation: None,
                floor: p.floor.clone(),
                truncated: p.truncated,
                note: "every scale lies below the resolution floor".into(),
            },
        };
    };
    if p.exhaustive && !p.truncated && eff.iter().all(|e| e.oscillation.is_zero()) {
        return Status::Proven {
            certificate: Certificate::ExhaustiveEnumeration { points: exhaustive_points, pairs: p.pairs_examined },
        };
    }
    let mid = eff[(eff.len() - 1) / 2];
    let persists = !fine.oscillation.is_zero() && &fine.oscillation + &fine.oscillation >= mid.oscillation;
    if persists {
        let terms = eff
            .iter()
            .filter_map(|e| {
                e.witness.as_ref().map(|w| WitnessTerm {
                    delta: e.delta.clone(),
                    x: w.x.clone(),
                    y: w.y.clone(),
                    center: w.center.clone(),
                    oscillation: w.oscillation.clone(),
                })
            })
            .collect();
        return Status::Refuted {
            basis: RefutationBasis::Sweep { finest_delta: fine.delta.clone(), floor: p.floor.clone() },
            witness: Witness { epsilon: fine.oscillation.clone(), point: None, terms },
        };
    }
    Status::NoViolationAtResolution {
        resolution: Resolution {
            finest_delta: Some(fine.delta.clone()),
            finest_oscillation: Some(fine.oscillation.clone()),
            floor: p.floor.clone(),
            truncated: p.truncated,
            note: if fine.oscillation.is_zero() {
                "no oscillation at the finest resolved scale".into()
            } else {
                "oscillation decays across the resolved scales".into()
            },
        },
    }
}

/// Winners for symmetric pairs given an explicit list.
pub(crate) fn sym_sweep(pairs: &[Candidate], schedule: &[QuadExt]) -> Vec<Option<Candidate>> {
    let mut b = Buckets::default();
    for c in pairs {
        b.offer(c.clone());
    }
    b.sweep(schedule)
}

/// Sparse tables for range max/min over the sample values.
pub(crate) struct RangeExtrema {
    max: Vec<Vec<usize>>,
    min: Vec<Vec<usize>>,
}

impl RangeExtrema {
    pub fn new(values: &[QuadExt]) -> Self {
        let n = values.len();
        let mut max = vec![(0..n).collect::<Vec<_>>()];
        let mut min = vec![(0..n).collect::<Vec<_>>()];
        let mut w = 1;
        while 2 * w <= n {
            let (pm, pn) = (max.last().unwrap(), min.last().unwrap());
            let mut nm = Vec::with_capacity(n + 1 - 2 * w);
            let mut nn = Vec::with_capacity(n + 1 - 2 * w);
            for i in 0..=n - 2 * w {
                let (a, b) = (pm[i], pm[i + w]);
                nm.push(if values[b] > values[a] { b } else { a });
                let (a, b) = (pn[i], pn[i + w]);
                nn.push(if values[b] < values[a] { b } else { a });
            }
            max.push(nm);
            min.push(nn);
            w *= 2;
        }
        RangeExtrema { max, min }
    }

    /// Indices of max and min over `lo..hi` (non-empty).
    pub fn query(&self, values: &[QuadExt], lo: usize, hi: usize) -> (usize, usize) {
        let len = hi - lo;
        let k = usize::BITS - 1 - len.leading_zeros();
        let w = 1usize << k;
        let (a, b) = (self.max[k as usize][lo], self.max[k as usize][hi - w]);
        let mx = if values[b] > values[a] { b } else { a };
        let (a, b) = (self.min[k as usize][lo], self.min[k as usize][hi - w]);
        let mn = if values[b] < values[a] { b } else { a };
        (mx, mn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buckets_take_prefix_maximum() {
        let mut b = Buckets::default();
        let mk = |sep: i64, osc: i64| Candidate {
            sep: QuadExt::frac(1, sep),
            x: QuadExt::int(sep),
            y: QuadExt::zero(),
            center: None,
            osc: QuadExt::int(osc),
        };
        b.offer(mk(2, 1));
        b.offer(mk(8, 5));
        b.offer(mk(4, 3));
        let sched = vec![QuadExt::one(), QuadExt::frac(1, 3), QuadExt::frac(1, 6), QuadExt::frac(1, 10)];
        let got: Vec<Option<i64>> =
            b.sweep(&sched).iter().map(|c| c.as_ref().map(|c| c.osc.rat.as_small().unwrap().0)).collect();
        assert_eq!(got, vec![Some(5), Some(5), Some(5), None]);
    }
}
