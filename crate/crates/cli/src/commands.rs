use symcont::analysis::{
    check_wrt_subset, classify, modulus_profile, verify_witness, AnalysisConfig, ModulusKind, Notion, Witness,
    WitnessCheck,
};
use symcont::domains::DomainSpec;
use symcont::functions::FuncSpec;
use symcont::zoo::{build_example, run_all};
use symcont::Error;

use crate::report::{InputEcho, Report, WitnessReplay};
use crate::spec::AnalysisSpec;

/// A finished command: the report and the process exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit: u8,
}

impl Outcome {
    fn new(report: Report, failed: bool) -> Self {
        Outcome { report, exit: u8::from(failed) }
    }
}

fn echo(spec: &AnalysisSpec) -> InputEcho {
    InputEcho { domain: spec.domain.clone(), function: spec.function.clone(), subset_b: spec.subset_b.clone() }
}

/// Write the witness out as JSON, read it back and check it against the
/// original domain and function.
fn replay(
    ambient: &DomainSpec,
    centers: Option<&DomainSpec>,
    f: &FuncSpec,
    notion: Notion,
    w: &Witness,
) -> Result<WitnessCheck, Error> {
    let text = serde_json::to_string(w).map_err(|e| Error::Parse(e.to_string()))?;
    let back: Witness = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if back != *w {
        return Ok(WitnessCheck {
            valid: false,
            terms_checked: 0,
            problems: vec!["JSON round trip changed it".into()],
        });
    }
    verify_witness(ambient, centers, f, notion, &back)
}

/// The four verdicts, plus `USC_wrt_B` when the spec names a centre set.
pub fn analyze(spec: &AnalysisSpec, cfg: &AnalysisConfig, verify: bool) -> Result<Outcome, Error> {
    let cl = classify(&spec.domain, &spec.function, cfg)?;
    let mut report = Report::new("analyze", cfg);
    report.input = Some(echo(spec));
    report.verdicts = cl.verdicts;
    report.profiles = cl.profiles;
    report.conflicts = cl.conflicts;
    report.work = Some(cl.work);
    if let Some(b) = &spec.subset_b {
        report.verdicts.push(check_wrt_subset(&spec.domain, b, &spec.function, cfg)?);
    }
    if verify {
        for v in &report.verdicts {
            if let Some(w) = v.status.witness() {
                let centers = spec.subset_b.as_ref().filter(|_| v.notion == Notion::UscWrtB);
                let check = replay(&spec.domain, centers, &spec.function, v.notion, w)?;
                report.witness_checks.push(WitnessReplay { subject: "input".into(), notion: v.notion, check });
            }
        }
    }
    report.collect_notices();
    let failed = !report.conflicts.is_empty() || report.witness_checks.iter().any(|r| !r.check.valid);
    Ok(Outcome::new(report, failed))
}

/// One modulus table: `uc` for the ordinary modulus, `usc` for the symmetric
/// one (centred on the spec's centre set when it has one).
pub fn moduli(spec: &AnalysisSpec, cfg: &AnalysisConfig, kind: ModulusKind) -> Result<Outcome, Error> {
    let centers = spec.subset_b.as_ref().filter(|_| kind == ModulusKind::Sym);
    let p = modulus_profile(&spec.domain, centers, &spec.function, kind, cfg)?;
    let mut report = Report::new("moduli", cfg);
    report.input = Some(echo(spec));
    report.profiles.push(p);
    report.collect_notices();
    Ok(Outcome::new(report, false))
}

/// The example catalog, or one entry of it.
pub fn zoo(cfg: &AnalysisConfig, only: Option<&str>, verify: bool) -> Result<Outcome, Error> {
    let table = run_all(cfg, only)?;
    let mut report = Report::new("zoo", cfg);
    if verify {
        for row in &table.rows {
            let Some(v) = &row.verdict else { continue };
            let Some(w) = v.status.witness() else { continue };
            let ex = build_example(&row.example, cfg.seed)?;
            let Some(s) = ex.subjects.iter().find(|s| s.label == row.subject) else { continue };
            let centers = s.centers.as_ref().filter(|_| v.notion == Notion::UscWrtB);
            let check = replay(&s.ambient, centers, &s.function, v.notion, w)?;
            report.witness_checks.push(WitnessReplay {
                subject: format!("{} {}", row.example, row.subject),
                notion: v.notion,
                check,
            });
        }
    }
    let failed = !table.all_match || report.witness_checks.iter().any(|r| !r.check.valid);
    report.zoo = Some(table);
    Ok(Outcome::new(report, failed))
}
