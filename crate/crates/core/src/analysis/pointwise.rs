//! Pointwise continuity and symmetric continuity on finite models.
//!
//! A point counts as a discontinuity at resolution when its local oscillation
//! persists from the middle to the finest resolved scale and at least two
//! distinct partners realise it at the finest scale. A single partner is what
//! a point isolated in the full set looks like once the model is cut off.

use std::collections::BTreeMap;

use super::engine::{Candidate, RangeExtrema, Sample};
use super::verdict::{RefutationBasis, Resolution, Status, Witness, WitnessTerm};
use crate::exactnum::QuadExt;

fn no_violation(eff: &[QuadExt], floor: Option<&QuadExt>, truncated: bool, note: &str) -> Status {
    Status::NoViolationAtResolution {
        resolution: Resolution {
            finest_delta: eff.last().cloned(),
            finest_oscillation: None,
            floor: floor.cloned(),
            truncated,
            note: note.into(),
        },
    }
}

fn window(s: &Sample, a: &QuadExt, delta: &QuadExt) -> (usize, usize) {
    let lo_edge = a - delta;
    let hi_edge = a + delta;
    let lo = s.points.partition_point(|p| *p <= lo_edge);
    let hi = s.points.partition_point(|p| *p < hi_edge);
    (lo, hi)
}

/// Continuity on a discrete sample. Returns the status and the number of
/// window queries and scans performed.
pub(crate) fn continuity(s: &Sample, eff: &[QuadExt], floor: Option<&QuadExt>, budget: usize) -> (Status, u64) {
    let n = s.points.len();
    let (Some(fine), Some(mid)) = (eff.last(), eff.get(eff.len().saturating_sub(1) / 2)) else {
        return (no_violation(eff, floor, false, "every scale lies below the resolution floor"), 0);
    };
    if n < 2 {
        return (no_violation(eff, floor, false, "fewer than two points"), 0);
    }
    let rq = RangeExtrema::new(&s.values);
    let mut examined = 0u64;
    let osc_at = |i: usize, d: &QuadExt, examined: &mut u64| -> QuadExt {
        *examined += 1;
        let (lo, hi) = window(s, &s.points[i], d);
        let (mx, mn) = rq.query(&s.values, lo, hi);
        let v = &s.values[i];
        let up = &s.values[mx] - v;
        let down = v - &s.values[mn];
        up.max(down)
    };
    // (count, index) of the best candidate
    let mut best: Option<(usize, usize, QuadExt)> = None;
    for i in 0..n {
        if examined as usize >= budget {
            return (no_violation(eff, floor, true, "pair budget exhausted"), examined);
        }
        let of = osc_at(i, fine, &mut examined);
        if of.is_zero() {
            continue;
        }
        let om = osc_at(i, mid, &mut examined);
        if &of + &of < om {
            continue;
        }
        let (lo, hi) = window(s, &s.points[i], fine);
        examined += (hi - lo) as u64;
        let count = (lo..hi)
            .filter(|&j| {
                let d = (&s.values[j] - &s.values[i]).abs();
                &d + &d >= of
            })
            .count();
        if count >= 2 && best.as_ref().is_none_or(|(c, _, _)| count > *c) {
            best = Some((count, i, of));
        }
    }
    let Some((_, i, _)) = best else {
        return (no_violation(eff, floor, false, "no persistent local oscillation"), examined);
    };
    let a = &s.points[i];
    let mut terms = Vec::new();
    for d in eff {
        let target = osc_at(i, d, &mut examined);
        // nearest partner realising the local oscillation
        let (lo, hi) = window(s, a, d);
        let partner = (lo..hi).filter(|&j| (&s.values[j] - &s.values[i]).abs() == target).min_by(|&j, &k| {
            (&s.points[j] - a).abs().cmp(&(&s.points[k] - a).abs()).then(s.points[j].cmp(&s.points[k]))
        });
        if let Some(j) = partner {
            terms.push(WitnessTerm {
                delta: d.clone(),
                x: s.points[j].clone(),
                y: a.clone(),
                center: None,
                oscillation: target,
            });
        }
    }
    let epsilon = terms.iter().map(|t| t.oscillation.clone()).min().unwrap_or_default();
    (
        Status::Refuted {
            basis: RefutationBasis::Sweep { finest_delta: fine.clone(), floor: floor.cloned() },
            witness: Witness { epsilon, point: Some(a.clone()), terms },
        },
        examined,
    )
}

/// Symmetric continuity from the list of oscillating symmetric pairs.
pub(crate) fn symmetric(pairs: &[Candidate], eff: &[QuadExt], floor: Option<&QuadExt>, truncated: bool) -> Status {
    let (Some(fine), Some(mid)) = (eff.last(), eff.get(eff.len().saturating_sub(1) / 2)) else {
        return no_violation(eff, floor, truncated, "every scale lies below the resolution floor");
    };
    let mut by_center: BTreeMap<&QuadExt, Vec<&Candidate>> = BTreeMap::new();
    for p in pairs {
        if let Some(c) = &p.center {
            by_center.entry(c).or_default().push(p);
        }
    }
    let local = |ps: &[&Candidate], d: &QuadExt| -> QuadExt {
        ps.iter().filter(|p| p.sep < *d).map(|p| p.osc.clone()).max().unwrap_or_default()
    };
    let mut best: Option<(usize, &QuadExt)> = None;
    for (c, ps) in &by_center {
        let of = local(ps, fine);
        if of.is_zero() {
            continue;
        }
        let om = local(ps, mid);
        if &of + &of < om {
            continue;
        }
        let count = ps.iter().filter(|p| p.sep < *fine && &p.osc + &p.osc >= of).count();
        if count >= 2 && best.is_none_or(|(k, _)| count > k) {
            best = Some((count, c));
        }
    }
    let Some((_, c)) = best else {
        return no_violation(eff, floor, truncated, "no persistent symmetric oscillation at any centre");
    };
    let ps = &by_center[c];
    let mut terms = Vec::new();
    for d in eff {
        let target = local(ps, d);
        let pick = ps
            .iter()
            .filter(|p| p.sep < *d && p.osc == target)
            .min_by(|a, b| a.sep.cmp(&b.sep).then(a.x.cmp(&b.x)).then(a.y.cmp(&b.y)));
        if let Some(p) = pick {
            terms.push(WitnessTerm {
                delta: d.clone(),
                x: p.x.clone(),
                y: p.y.clone(),
                center: Some(c.clone()),
                oscillation: p.osc.clone(),
            });
        }
    }
    let epsilon = terms.iter().map(|t| t.oscillation.clone()).min().unwrap_or_default();
    Status::Refuted {
        basis: RefutationBasis::Sweep { finest_delta: fine.clone(), floor: floor.cloned() },
        witness: Witness { epsilon, point: Some(c.clone()), terms },
    }
}
