use serde::{Deserialize, Serialize};

use super::IntervalPiece;
use crate::error::Error;
use crate::exactnum::QuadExt;

/// A boundary point where two input pieces touch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GluePoint {
    pub at: QuadExt,
    /// Whether the point itself belongs to the union.
    pub in_set: bool,
}

/// Maximal run of pieces glued end to end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Component {
    /// Closure-wise span: the component minus the glue points not in the set.
    pub span: IntervalPiece,
    pub glue: Vec<GluePoint>,
    /// Indices into the input slice.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SharedEndpoint {
    pub left: usize,
    pub right: usize,
    pub at: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Merge {
    pub components: Vec<Component>,
    /// Distance between every pair of distinct components `(i, j)`, `i < j`.
    pub gaps: Vec<QuadExt>,
    pub shared_endpoint_pairs: Vec<SharedEndpoint>,
}

impl Merge {
    /// Smallest positive gap between components.
    pub fn min_gap(&self) -> Option<&QuadExt> {
        self.gaps.iter().min()
    }
}

fn hi_cmp(a: &IntervalPiece, b: &IntervalPiece) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    match (&a.hi, &b.hi) {
        (None, None) => Equal,
        (None, Some(_)) => Greater,
        (Some(_), None) => Less,
        (Some(x), Some(y)) => x.cmp(y).then(a.hi_closed.cmp(&b.hi_closed)),
    }
}

fn overlaps(a: &IntervalPiece, b: &IntervalPiece) -> bool {
    a.intersect(b).is_some()
}

/// Group pieces into connected components, gluing at shared endpoints.
/// Overlapping pieces are rejected.
pub fn merge_interval_components(pieces: &[IntervalPiece]) -> Result<Merge, Error> {
    for p in pieces {
        p.validate()?;
    }
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&i, &j| pieces[i].order_key_cmp(&pieces[j]));
    // every earlier piece starts no later than the current one, so the
    // current piece overlaps some earlier piece iff it overlaps the one
    // reaching furthest right
    let mut reach: Option<usize> = None;
    for &idx in &order {
        if let Some(r) = reach {
            if overlaps(&pieces[r], &pieces[idx]) {
                return Err(Error::OverlappingIntervals { first: r.min(idx), second: r.max(idx) });
            }
            if hi_cmp(&pieces[idx], &pieces[r]).is_gt() {
                reach = Some(idx);
            }
        } else {
            reach = Some(idx);
        }
    }

    let mut components: Vec<Component> = Vec::new();
    let mut shared = Vec::new();
    for &idx in &order {
        let p = &pieces[idx];
        if let Some(last) = components.last_mut() {
            let touching = matches!((&last.span.hi, &p.lo), (Some(h), Some(l)) if h == l);
            if touching {
                let at = p.lo.clone().unwrap_or_default();
                let in_set = last.span.hi_closed || p.lo_closed;
                shared.push(SharedEndpoint { left: *last.members.last().unwrap_or(&idx), right: idx, at: at.clone() });
                if last.glue.last().map(|g| g.at != at).unwrap_or(true) {
                    last.glue.push(GluePoint { at, in_set });
                } else if let Some(g) = last.glue.last_mut() {
                    g.in_set |= in_set;
                }
                last.span.hi = p.hi.clone();
                last.span.hi_closed = p.hi_closed;
                last.members.push(idx);
                continue;
            }
        }
        components.push(Component { span: p.clone(), glue: Vec::new(), members: vec![idx] });
    }

    let mut gaps = Vec::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let hi = components[i].span.hi.as_ref();
            let lo = components[j].span.lo.as_ref();
            if let (Some(h), Some(l)) = (hi, lo) {
                gaps.push(l - h);
            }
        }
    }
    Ok(Merge { components, gaps, shared_endpoint_pairs: shared })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadExt {
        QuadExt::int(n)
    }

    #[test]
    fn gap_between_closed_pieces() {
        let m =
            merge_interval_components(&[IntervalPiece::closed(q(0), q(1)), IntervalPiece::closed(q(2), q(3))]).unwrap();
        assert_eq!(m.components.len(), 2);
        assert_eq!(m.gaps, vec![q(1)]);
        assert!(m.shared_endpoint_pairs.is_empty());
    }

    #[test]
    fn open_pieces_glue() {
        let m = merge_interval_components(&[IntervalPiece::open(q(1), q(2)), IntervalPiece::open(q(0), q(1))]).unwrap();
        assert_eq!(m.components.len(), 1);
        assert_eq!(m.components[0].span, IntervalPiece::open(q(0), q(2)));
        assert_eq!(m.components[0].glue, vec![GluePoint { at: q(1), in_set: false }]);
        assert_eq!(m.shared_endpoint_pairs, vec![SharedEndpoint { left: 1, right: 0, at: q(1) }]);
        assert!(m.gaps.is_empty());
    }

    #[test]
    fn overlap_rejected() {
        let e = merge_interval_components(&[IntervalPiece::closed(q(0), q(2)), IntervalPiece::closed(q(1), q(3))]);
        assert_eq!(e, Err(Error::OverlappingIntervals { first: 0, second: 1 }));
        let e = merge_interval_components(&[IntervalPiece::closed(q(0), q(1)), IntervalPiece::closed(q(1), q(3))]);
        assert!(e.is_err());
    }

    #[test]
    fn degenerate_piece_glues_both_sides() {
        let m = merge_interval_components(&[
            IntervalPiece::open(q(0), q(1)),
            IntervalPiece::point(q(1)),
            IntervalPiece::open(q(1), q(2)),
        ])
        .unwrap();
        assert_eq!(m.components.len(), 1);
        assert_eq!(m.components[0].glue, vec![GluePoint { at: q(1), in_set: true }]);
        assert_eq!(m.shared_endpoint_pairs.len(), 2);
    }
}
