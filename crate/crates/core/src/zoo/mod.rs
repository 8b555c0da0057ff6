//! The catalog of worked examples rebuilt as (domain, function, expected verdicts),
//! with the verifiers their arguments rest on.

mod catalog;
mod verify;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_sequence, check_wrt_subset, classify, sequence_witness, uniform_limit_transfer, AnalysisConfig, ModulusKind,
    Notion, RefutationBasis, Status, Verdict,
};
use crate::domains::{Domain, DomainSpec, StaircaseParams, StaircaseVariant};
use crate::error::Error;
use crate::functions::{bounded_on, one_sided_limits, SideLimit};

pub use catalog::{build_example, step_function, CatalogEntry, Expected, ExtraCheck, Subject, EXAMPLE_IDS};
pub use verify::{
    midpoint_exclusion_naturals, midpoint_exclusion_primes, verify_staircase_b_witness, verify_staircase_proof,
    MidpointReport, StaircaseProofReport, StaircaseWitnessReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZooRow {
    pub example: String,
    pub subject: String,
    /// A notion name, or the name of a side check.
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationPart {
    /// Holds for the establishing rows.
    pub holds: Notion,
    /// Fails for the establishing rows.
    pub fails: Notion,
    pub established_by: Vec<String>,
}

/// One strict inclusion or non-inclusion between the four classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Relation {
    pub number: u8,
    pub statement: String,
    pub parts: Vec<RelationPart>,
    pub witnessed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZooTable {
    pub seed: u64,
    pub max_pairs: usize,
    pub enum_limit: usize,
    pub rows: Vec<ZooRow>,
    pub relations: Vec<Relation>,
    pub all_match: bool,
}

fn matches(expected: Expected, status: &Status, profiles_zero: bool) -> bool {
    match expected {
        Expected::Proven => status.is_proven(),
        Expected::Refuted => status.is_refuted(),
        Expected::ProvenOnTruncation => {
            status.is_proven() || (matches!(status, Status::NoViolationAtResolution { .. }) && profiles_zero)
        }
    }
}

fn error_row(example: &str, subject: &str, check: &str, expected: &str, e: &Error) -> ZooRow {
    ZooRow {
        example: example.into(),
        subject: subject.into(),
        check: check.into(),
        expected: expected.into(),
        actual: format!("error: {e}"),
        matches: false,
        verdict: None,
    }
}

fn check_row(example: &str, subject: &str, check: &str, expected: &str, actual: String, ok: bool) -> ZooRow {
    ZooRow {
        example: example.into(),
        subject: subject.into(),
        check: check.into(),
        expected: expected.into(),
        actual,
        matches: ok,
        verdict: None,
    }
}

/// Verdict rows and witness rows for one subject; also returns the computed
/// statuses for the relation table.
fn run_subject(ex: &CatalogEntry, s: &Subject, cfg: &AnalysisConfig) -> (Vec<ZooRow>, Vec<(Notion, Status)>) {
    let mut cfg = cfg.clone();
    if let Some(k) = s.grid_exponent {
        cfg.grid_exponent = k;
    }
    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    let wants_four = s.expected.iter().any(|(n, _)| *n != Notion::UscWrtB);
    let classified = wants_four.then(|| classify(&s.ambient, &s.function, &cfg));
    for (notion, exp) in &s.expected {
        let result = match notion {
            Notion::UscWrtB => {
                let b = s.centers.as_ref().unwrap_or(&s.ambient);
                check_wrt_subset(&s.ambient, b, &s.function, &cfg).map(|v| (v, true))
            }
            n => match classified.as_ref().expect("classification computed") {
                Ok(cl) => {
                    let v = cl.get(*n).cloned().expect("all four notions are classified");
                    let zero = cl
                        .profiles
                        .iter()
                        .filter(|p| p.kind == ModulusKind::Sym)
                        .all(|p| p.entries.iter().filter(|e| e.resolved).all(|e| e.oscillation.is_zero()))
                        && cl.profiles.iter().any(|p| p.kind == ModulusKind::Sym);
                    Ok((v, zero))
                }
                Err(e) => Err(e.clone()),
            },
        };
        let result = result.and_then(|(v, zero)| Ok((confirm_by_sequence(s, *notion, v, &cfg)?, zero)));
        match result {
            Ok((v, zero)) => {
                let ok = matches(*exp, &v.status, zero);
                statuses.push((*notion, v.status.clone()));
                rows.push(ZooRow {
                    example: ex.id.clone(),
                    subject: s.label.clone(),
                    check: notion.to_string(),
                    expected: exp.label().into(),
                    actual: v.status.summary(),
                    matches: ok,
                    verdict: Some(v),
                });
            }
            Err(e) => rows.push(error_row(&ex.id, &s.label, &notion.to_string(), exp.label(), &e)),
        }
    }
    for w in &s.witnesses {
        let name = format!("{} witness sequence", w.notion);
        let centers = s.centers.as_ref().filter(|_| w.notion == Notion::UscWrtB);
        match check_sequence(&s.ambient, centers, &s.function, w) {
            Ok(c) => {
                let actual = if c.passed() {
                    format!(
                        "valid: {} terms, min oscillation {}",
                        c.terms,
                        c.min_oscillation.as_ref().map(|o| o.to_string()).unwrap_or_default()
                    )
                } else {
                    format!(
                        "invalid: {}",
                        c.failures.first().cloned().unwrap_or_else(|| "no positive oscillation".into())
                    )
                };
                rows.push(check_row(&ex.id, &s.label, &name, &w.description, actual, c.passed()));
            }
            Err(e) => rows.push(error_row(&ex.id, &s.label, &name, &w.description, &e)),
        }
    }
    (rows, statuses)
}

/// A sweep that stays inconclusive on the finite model is settled by a
/// catalogued sequence, when one checks out and covers every resolved scale.
fn confirm_by_sequence(s: &Subject, notion: Notion, v: Verdict, cfg: &AnalysisConfig) -> Result<Verdict, Error> {
    if !matches!(v.status, Status::NoViolationAtResolution { .. }) {
        return Ok(v);
    }
    let centers = s.centers.as_ref().filter(|_| notion == Notion::UscWrtB);
    let floor = Domain::compile(&s.ambient)?.resolution_floor();
    let eff = cfg.effective_schedule(floor.as_ref());
    for w in s.witnesses.iter().filter(|w| w.notion == notion) {
        if !check_sequence(&s.ambient, centers, &s.function, w)?.passed() {
            continue;
        }
        if let Some(witness) = sequence_witness(&s.ambient, centers, &s.function, w, &eff)? {
            let basis = RefutationBasis::WitnessSequence { label: "witness sequence, sweep inconclusive".into() };
            return Ok(Verdict { notion, status: Status::Refuted { basis, witness } });
        }
    }
    Ok(v)
}

fn run_check(ex: &CatalogEntry, check: &ExtraCheck, cfg: &AnalysisConfig) -> Vec<ZooRow> {
    let id = ex.id.as_str();
    match check {
        ExtraCheck::MidpointExclusionPrimes { bound } => {
            let name = "midpoint exclusion";
            match midpoint_exclusion_primes(*bound) {
                Ok(r) => vec![check_row(
                    id,
                    "A",
                    name,
                    "no midpoint of (0, 1/p) or (1/p, 1/q) in A",
                    format!("{} violations in {} pairs up to {}", r.violations.len(), r.pairs_checked, r.bound),
                    r.holds(),
                )],
                Err(e) => vec![error_row(id, "A", name, "", &e)],
            }
        }
        ExtraCheck::MidpointInclusionNaturals { bound } => {
            let name = "midpoint inclusion";
            match midpoint_exclusion_naturals(*bound) {
                Ok(r) => {
                    let want: Vec<Vec<u64>> = (1..=bound / 2).map(|n| vec![n]).collect();
                    vec![check_row(
                        id,
                        "A",
                        name,
                        &format!("1/(2n) in A for every n <= {}", bound / 2),
                        format!(
                            "{} of {} pairs (1/n, 0) have their midpoint in A",
                            r.violations.len(),
                            r.pairs_checked
                        ),
                        r.violations == want,
                    )]
                }
                Err(e) => vec![error_row(id, "A", name, "", &e)],
            }
        }
        ExtraCheck::UnboundedGrowth { function, bounds } => {
            let name = "unbounded";
            let mut sups = Vec::new();
            for &n in bounds {
                let d = DomainSpec::OddPrimeReciprocals { max_prime: n, with_zero: true };
                match bounded_on(function, &d, cfg.enum_limit) {
                    Ok(r) => sups.push((n, r.bound)),
                    Err(e) => return vec![error_row(id, "f", name, "", &e)],
                }
            }
            let ok = sups.iter().all(|(n, b)| {
                let (primes, _) = crate::domains::primes::odd_primes_up_to(*n, usize::MAX);
                b.as_ref() == primes.last().map(|p| crate::exactnum::QuadExt::int(*p as i64)).as_ref()
            }) && sups.windows(2).all(|w| w[0].1 < w[1].1);
            let shown: Vec<String> = sups
                .iter()
                .map(|(n, b)| format!("{n}: {}", b.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "none".into())))
                .collect();
            vec![check_row(id, "f", name, "sup |f| is the largest prime of each truncation", shown.join(", "), ok)]
        }
        ExtraCheck::OneSidedJump { function, at, left, right } => {
            let name = format!("one-sided limits at {at}");
            match one_sided_limits(function, at) {
                Ok(l) => {
                    let ok = l.left == SideLimit::Value(left.clone()) && l.right == SideLimit::Value(right.clone());
                    let show = |s: &SideLimit| s.value().map(|v| v.to_string()).unwrap_or_else(|| format!("{s:?}"));
                    vec![check_row(
                        id,
                        "limit f",
                        &name,
                        &format!("left {left}, right {right}"),
                        format!("left {}, right {}", show(&l.left), show(&l.right)),
                        ok,
                    )]
                }
                Err(e) => vec![error_row(id, "limit f", &name, "", &e)],
            }
        }
        ExtraCheck::PointwiseLimit { members, limit, ambient } => {
            match uniform_limit_transfer(members, limit, ambient, cfg) {
                Ok(r) => {
                    let dists: Vec<String> = r.sup_dist.iter().map(|d| format!("{:.4}", d.to_f64())).collect();
                    vec![
                        check_row(
                            id,
                            "f_n -> f",
                            "transfer bound",
                            "omega_f <= omega_fn + 2 supDist for every n and delta",
                            format!("{} of {} rows hold", r.rows.iter().filter(|x| x.holds).count(), r.rows.len()),
                            r.bound_holds(),
                        ),
                        check_row(
                            id,
                            "f_n -> f",
                            "convergence",
                            "pointwise only: supDist stagnates",
                            format!("supDist ~ [{}]", dists.join(", ")),
                            r.stagnant,
                        ),
                    ]
                }
                Err(e) => vec![error_row(id, "f_n -> f", "transfer bound", "", &e)],
            }
        }
        ExtraCheck::StaircaseProof { blocks } => {
            let params = StaircaseParams { variant: StaircaseVariant::A, blocks: *blocks };
            match verify_staircase_proof(&params, *blocks) {
                Ok(r) => vec![check_row(
                    id,
                    "step f",
                    "proof inequalities",
                    &format!("unit gaps, both midpoint chains and UC pairs for k <= {blocks}"),
                    if r.passed() { format!("all hold for k <= {}", r.blocks_checked) } else { r.failures.join("; ") },
                    r.passed(),
                )],
                Err(e) => vec![error_row(id, "step f", "proof inequalities", "", &e)],
            }
        }
        ExtraCheck::StaircaseWitness { terms } => match verify_staircase_b_witness(*terms) {
            Ok(r) => vec![check_row(
                id,
                "step f",
                "cross-block pairs",
                &format!("midpoint in [a(2n-1), a(2n)] and oscillation 2 for n <= {terms}"),
                if r.passed() { format!("all hold for n <= {}", r.terms) } else { r.failures.join("; ") },
                r.passed(),
            )],
            Err(e) => vec![error_row(id, "step f", "cross-block pairs", "", &e)],
        },
    }
}

/// A relation number, its statement and the (holds, fails) notion pairs that witness it.
type Claim = (u8, &'static str, &'static [(Notion, Notion)]);

fn relation_table(evidence: &[(String, Vec<(Notion, Status)>)]) -> Vec<Relation> {
    use Notion::{C, SC, UC, USC};
    let spec: [Claim; 5] = [
        (1, "UC implies C, and the converse fails", &[(C, UC)]),
        (2, "C implies SC, and the converse fails", &[(SC, C)]),
        (3, "USC implies SC, and the converse fails", &[(SC, USC)]),
        (4, "UC implies USC, and the converse fails", &[(USC, UC)]),
        (5, "USC is not contained in C, and C is not contained in USC", &[(USC, C), (C, USC)]),
    ];
    spec.iter()
        .map(|(number, statement, parts)| {
            let parts: Vec<RelationPart> = parts
                .iter()
                .map(|&(holds, fails)| {
                    let established_by = evidence
                        .iter()
                        .filter(|(_, st)| {
                            let get = |n: Notion| st.iter().find(|(m, _)| *m == n).map(|(_, s)| s);
                            get(holds).is_some_and(|s| s.is_proven()) && get(fails).is_some_and(|s| s.is_refuted())
                        })
                        .map(|(label, _)| label.clone())
                        .collect();
                    RelationPart { holds, fails, established_by }
                })
                .collect();
            Relation {
                number: *number,
                statement: statement.to_string(),
                witnessed: parts.iter().all(|p| !p.established_by.is_empty()),
                parts,
            }
        })
        .collect()
}

/// Run the catalog, or the single entry `only`.
pub fn run_all(cfg: &AnalysisConfig, only: Option<&str>) -> Result<ZooTable, Error> {
    let ids: Vec<&str> = match only {
        Some(id) => {
            if !EXAMPLE_IDS.contains(&id) {
                return Err(Error::UnknownExample(id.into()));
            }
            vec![id]
        }
        None => EXAMPLE_IDS.to_vec(),
    };
    let mut rows = Vec::new();
    let mut evidence = Vec::new();
    for id in ids {
        let ex = build_example(id, cfg.seed)?;
        let bad = ex.inconsistencies();
        rows.push(check_row(
            id,
            "",
            "expectations consistent",
            "UC => USC => SC and UC => C => SC",
            if bad.is_empty() { "consistent".into() } else { bad.join("; ") },
            bad.is_empty(),
        ));
        for s in &ex.subjects {
            let (r, st) = run_subject(&ex, s, cfg);
            rows.extend(r);
            evidence.push((format!("{id} {}", s.label), st));
        }
        for c in &ex.checks {
            rows.extend(run_check(&ex, c, cfg));
        }
    }
    let relations = relation_table(&evidence);
    let all_match = rows.iter().all(|r| r.matches) && (only.is_some() || relations.iter().all(|r| r.witnessed));
    Ok(ZooTable { seed: cfg.seed, max_pairs: cfg.max_pairs, enum_limit: cfg.enum_limit, rows, relations, all_match })
}
