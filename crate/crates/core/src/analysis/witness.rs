use serde::{Deserialize, Serialize};

use super::verdict::{Notion, Witness, WitnessTerm};
use crate::domains::{Domain, DomainSpec};
use crate::error::Error;
use crate::exactnum::{midpoint, QuadExt};
use crate::functions::{FuncSpec, Function};

/// Result of re-checking a witness from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessCheck {
    pub valid: bool,
    pub terms_checked: usize,
    pub problems: Vec<String>,
}

/// Re-evaluate every term of `w` for `notion`: both points in the ambient set,
/// the stored oscillation reproduced exactly and at least `epsilon`, the
/// separation below the term's delta, and for symmetric notions the centre is
/// the midpoint and lies in `centers` (the ambient set when `None`).
pub fn verify_witness(
    ambient: &DomainSpec,
    centers: Option<&DomainSpec>,
    f: &FuncSpec,
    notion: Notion,
    w: &Witness,
) -> Result<WitnessCheck, Error> {
    let amb = Domain::compile(ambient)?;
    let b = centers.map(Domain::compile).transpose()?;
    let f = Function::compile(f)?;
    let mut problems = Vec::new();
    if w.terms.is_empty() {
        problems.push("witness has no terms".into());
    }
    if w.epsilon.signum() <= 0 {
        problems.push(format!("epsilon {} is not positive", w.epsilon));
    }
    for (i, t) in w.terms.iter().enumerate() {
        check_term(&amb, b.as_ref(), &f, notion, w, t).unwrap_or_else(|e| vec![e.to_string()]).into_iter().for_each(
            |p| {
                problems.push(format!("term {i}: {p}"));
            },
        );
    }
    Ok(WitnessCheck { valid: problems.is_empty(), terms_checked: w.terms.len(), problems })
}

fn check_term(
    amb: &Domain,
    b: Option<&Domain>,
    f: &Function,
    notion: Notion,
    w: &Witness,
    t: &WitnessTerm,
) -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    for p in [&t.x, &t.y] {
        if !amb.contains(p) {
            out.push(format!("{p} is not in the domain"));
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    let osc = (&f.eval(&t.x)? - &f.eval(&t.y)?).abs();
    if osc != t.oscillation {
        out.push(format!("oscillation is {osc}, stored {}", t.oscillation));
    }
    if osc < w.epsilon {
        out.push(format!("oscillation {osc} is below epsilon {}", w.epsilon));
    }
    if t.x == t.y {
        out.push("degenerate pair".into());
    }
    let sep = (&t.x - &t.y).abs();
    if notion.is_symmetric() {
        let m = midpoint(&t.x, &t.y);
        match &t.center {
            Some(c) if *c == m => {}
            Some(c) => out.push(format!("centre {c} is not the midpoint {m}")),
            None => out.push("missing centre".into()),
        }
        let inside = match (notion, b) {
            (Notion::UscWrtB, Some(b)) => b.contains(&m),
            _ => amb.contains(&m),
        };
        if !inside {
            out.push(format!("midpoint {m} is not an admissible centre"));
        }
        if sep.half() >= t.delta {
            out.push(format!("half-separation {} is not below delta {}", sep.half(), t.delta));
        }
        if notion == Notion::SC && w.point.as_ref() != Some(&m) {
            out.push("pair is not centred at the witness point".into());
        }
    } else {
        if sep >= t.delta {
            out.push(format!("separation {sep} is not below delta {}", t.delta));
        }
        if notion == Notion::C && w.point.as_ref().is_none_or(|a| *a != t.y) {
            out.push("second point is not the witness point".into());
        }
    }
    Ok(out)
}

/// One term `(x_n, y_n)` of a closed-form witness sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTerm {
    pub n: u64,
    pub x: QuadExt,
    pub y: QuadExt,
    /// Value of `|f(x_n) - f(y_n)|` asserted by the construction.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub claimed: Option<QuadExt>,
}

/// Pairs `(x_n, y_n)` with `|x_n - y_n| -> 0` along which the oscillation
/// stays away from zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSequence {
    pub notion: Notion,
    pub description: String,
    pub terms: Vec<SequenceTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SequenceCheck {
    pub terms: usize,
    /// Every point lies in the domain.
    pub in_domain: bool,
    /// Every midpoint is an admissible centre (symmetric notions only).
    pub midpoints_admissible: bool,
    /// Every claimed oscillation is reproduced exactly.
    pub claims_hold: bool,
    /// Separations strictly decrease along the sequence.
    pub separations_shrink: bool,
    pub min_oscillation: Option<QuadExt>,
    pub max_separation: Option<QuadExt>,
    pub min_separation: Option<QuadExt>,
    pub failures: Vec<String>,
}

impl SequenceCheck {
    pub fn passed(&self) -> bool {
        self.in_domain
            && self.midpoints_admissible
            && self.claims_hold
            && self.separations_shrink
            && self.min_oscillation.as_ref().is_some_and(|e| e.signum() > 0)
    }
}

/// Check a sequence term by term against the domain and function.
pub fn check_sequence(
    ambient: &DomainSpec,
    centers: Option<&DomainSpec>,
    f: &FuncSpec,
    seq: &WitnessSequence,
) -> Result<SequenceCheck, Error> {
    let amb = Domain::compile(ambient)?;
    let b = centers.map(Domain::compile).transpose()?;
    let f = Function::compile(f)?;
    let mut out = SequenceCheck {
        terms: seq.terms.len(),
        in_domain: true,
        midpoints_admissible: true,
        claims_hold: true,
        separations_shrink: true,
        min_oscillation: None,
        max_separation: None,
        min_separation: None,
        failures: Vec::new(),
    };
    let mut prev_sep: Option<QuadExt> = None;
    for t in &seq.terms {
        if !amb.contains(&t.x) || !amb.contains(&t.y) {
            out.in_domain = false;
            out.failures.push(format!("n = {}: point outside the domain", t.n));
            continue;
        }
        if seq.notion.is_symmetric() {
            let m = midpoint(&t.x, &t.y);
            let ok = b.as_ref().map_or_else(|| amb.contains(&m), |b| b.contains(&m));
            if !ok {
                out.midpoints_admissible = false;
                out.failures.push(format!("n = {}: midpoint {m} not admissible", t.n));
            }
        }
        let osc = (&f.eval(&t.x)? - &f.eval(&t.y)?).abs();
        if t.claimed.as_ref().is_some_and(|c| *c != osc) {
            out.claims_hold = false;
            out.failures.push(format!("n = {}: oscillation {osc} differs from the claim", t.n));
        }
        let sep = (&t.x - &t.y).abs();
        if prev_sep.as_ref().is_some_and(|p| sep >= *p) {
            out.separations_shrink = false;
        }
        out.min_oscillation = Some(out.min_oscillation.map_or(osc.clone(), |m: QuadExt| m.min(osc)));
        out.max_separation = Some(out.max_separation.map_or(sep.clone(), |m: QuadExt| m.max(sep.clone())));
        out.min_separation = Some(out.min_separation.map_or(sep.clone(), |m: QuadExt| m.min(sep.clone())));
        prev_sep = Some(sep);
    }
    Ok(out)
}

/// Turn a checked sequence into a witness over `schedule`: for each delta,
/// the first admissible term whose separation (half-separation for symmetric
/// notions) is below it.
pub fn sequence_witness(
    ambient: &DomainSpec,
    centers: Option<&DomainSpec>,
    f: &FuncSpec,
    seq: &WitnessSequence,
    schedule: &[QuadExt],
) -> Result<Option<Witness>, Error> {
    let amb = Domain::compile(ambient)?;
    let b = centers.map(Domain::compile).transpose()?;
    let func = Function::compile(f)?;
    let mut terms = Vec::new();
    for d in schedule {
        let mut found = None;
        for t in &seq.terms {
            if !amb.contains(&t.x) || !amb.contains(&t.y) {
                continue;
            }
            let m = midpoint(&t.x, &t.y);
            let sep = (&t.x - &t.y).abs();
            let (ok, scaled) = if seq.notion.is_symmetric() {
                (b.as_ref().map_or_else(|| amb.contains(&m), |b| b.contains(&m)), sep.half())
            } else {
                (true, sep)
            };
            if ok && scaled < *d {
                let osc = (&func.eval(&t.x)? - &func.eval(&t.y)?).abs();
                found = Some(WitnessTerm {
                    delta: d.clone(),
                    x: t.x.clone(),
                    y: t.y.clone(),
                    center: seq.notion.is_symmetric().then_some(m),
                    oscillation: osc,
                });
                break;
            }
        }
        match found {
            Some(t) => terms.push(t),
            None => return Ok(None),
        }
    }
    let Some(epsilon) = terms.iter().map(|t| t.oscillation.clone()).min() else {
        return Ok(None);
    };
    if epsilon.is_zero() {
        return Ok(None);
    }
    Ok(Some(Witness { epsilon, point: None, terms }))
}
