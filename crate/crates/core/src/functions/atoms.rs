use super::{CombineOp, Formula, FuncSpec};
use crate::domains::{Domain, DomainKind, IntervalPiece};
use crate::error::Error;

/// Interval on which the function is given by a single formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub piece: IntervalPiece,
    pub formula: Formula,
}

/// Split `pieces` into atoms of `f`. Returns `Ok(None)` when some region is
/// not an interval or finite set, or when a combination of formulas has no
/// closed form in the formula language.
pub fn interval_atoms(f: &FuncSpec, pieces: &[IntervalPiece]) -> Result<Option<Vec<Atom>>, Error> {
    let mut out = Vec::new();
    for p in pieces {
        match atoms_on(f, p)? {
            Some(a) => out.extend(a),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn atoms_on(f: &FuncSpec, ambient: &IntervalPiece) -> Result<Option<Vec<Atom>>, Error> {
    match f {
        FuncSpec::Piecewise(pieces) => {
            let mut atoms = Vec::new();
            for p in pieces {
                let d = Domain::compile(&p.region)?;
                let Some(shapes) = interval_shapes(&d) else {
                    return Ok(None);
                };
                for s in shapes {
                    if let Some(piece) = ambient.intersect(&s) {
                        atoms.push(Atom { piece, formula: p.formula.clone() });
                    }
                }
            }
            atoms.sort_by(|a, b| a.piece.order_key_cmp(&b.piece));
            check_tiling(ambient, &atoms)?;
            Ok(Some(atoms))
        }
        FuncSpec::Combined { op, operands } => {
            let mut parts = Vec::new();
            for g in operands {
                match atoms_on(g, ambient)? {
                    Some(a) => parts.push(a),
                    None => return Ok(None),
                }
            }
            match op {
                CombineOp::Scale(k) => {
                    let mut out = Vec::new();
                    for a in &parts[0] {
                        let Some(formula) = a.formula.scaled(k) else {
                            return Ok(None);
                        };
                        out.push(Atom { piece: a.piece.clone(), formula });
                    }
                    Ok(Some(out))
                }
                _ => {
                    let mut out = Vec::new();
                    for a in &parts[0] {
                        for b in &parts[1] {
                            let Some(piece) = a.piece.intersect(&b.piece) else {
                                continue;
                            };
                            let formula = match op {
                                CombineOp::Add => a.formula.plus(&b.formula),
                                CombineOp::Sub => a.formula.minus(&b.formula),
                                CombineOp::Mul => a.formula.times(&b.formula),
                                CombineOp::Div => a.formula.over(&b.formula)?,
                                CombineOp::Scale(_) => unreachable!(),
                            };
                            let Some(formula) = formula else {
                                return Ok(None);
                            };
                            out.push(Atom { piece, formula });
                        }
                    }
                    out.sort_by(|a, b| a.piece.order_key_cmp(&b.piece));
                    Ok(Some(out))
                }
            }
        }
    }
}

/// Region as a list of intervals (points become degenerate intervals).
fn interval_shapes(d: &Domain) -> Option<Vec<IntervalPiece>> {
    match d.kind() {
        DomainKind::Intervals { pieces, .. } => Some(pieces.clone()),
        DomainKind::Points { sorted, .. } => Some(sorted.iter().cloned().map(IntervalPiece::point).collect()),
        DomainKind::Integers { lo, hi } if hi - lo <= 100_000 => {
            Some((*lo..=*hi).map(|n| IntervalPiece::point(crate::exactnum::QuadExt::int(n))).collect())
        }
        DomainKind::Union(parts) => {
            let mut v = Vec::new();
            for p in parts {
                v.extend(interval_shapes(p)?);
            }
            Some(v)
        }
        _ => None,
    }
}

/// Sorted atoms must cover `ambient` without gaps or overlaps.
fn check_tiling(ambient: &IntervalPiece, atoms: &[Atom]) -> Result<(), Error> {
    let uncovered = |p: String| Err(Error::Uncovered { point: p });
    let Some(first) = atoms.first() else {
        return uncovered(format!("{ambient}"));
    };
    if first.piece.lo != ambient.lo || first.piece.lo_closed != ambient.lo_closed {
        return uncovered(first.piece.lo.as_ref().map_or("-inf".into(), |x| x.to_string()));
    }
    for (i, w) in atoms.windows(2).enumerate() {
        let (a, b) = (&w[0].piece, &w[1].piece);
        let at = a.hi.as_ref().map_or("inf".into(), |x| x.to_string());
        if a.hi != b.lo {
            return uncovered(at);
        }
        match (a.hi_closed, b.lo_closed) {
            (true, true) => return Err(Error::OverlappingPieces { first: i, second: i + 1, point: at }),
            (false, false) => return uncovered(at),
            _ => {}
        }
    }
    let last = &atoms[atoms.len() - 1].piece;
    if last.hi != ambient.hi || last.hi_closed != ambient.hi_closed {
        return uncovered(last.hi.as_ref().map_or("inf".into(), |x| x.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DomainSpec;
    use crate::exactnum::QuadExt;
    use crate::functions::Piece;

    #[test]
    fn product_of_identities_flattens() {
        let line = IntervalPiece::real_line();
        let f = FuncSpec::single(DomainSpec::IntervalUnion(vec![line.clone()]), Formula::Identity);
        let fg = FuncSpec::Combined { op: CombineOp::Mul, operands: vec![f.clone(), f] };
        let atoms = interval_atoms(&fg, &[line]).unwrap().unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].formula, Formula::Monomial(2));
    }

    #[test]
    fn gap_in_cover_is_reported() {
        let amb = IntervalPiece::closed(QuadExt::int(0), QuadExt::int(2));
        let f = FuncSpec::Piecewise(vec![
            Piece {
                region: DomainSpec::IntervalUnion(vec![IntervalPiece::new(
                    Some(QuadExt::int(0)),
                    Some(QuadExt::int(1)),
                    true,
                    false,
                )]),
                formula: Formula::Identity,
            },
            Piece {
                region: DomainSpec::IntervalUnion(vec![IntervalPiece::new(
                    Some(QuadExt::int(1)),
                    Some(QuadExt::int(2)),
                    false,
                    true,
                )]),
                formula: Formula::Identity,
            },
        ]);
        assert_eq!(interval_atoms(&f, &[amb]), Err(Error::Uncovered { point: "1".into() }));
    }
}
