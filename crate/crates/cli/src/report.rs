//! The report printed by every command, in text or JSON.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use symcont::analysis::{
    AnalysisConfig, ModulusKind, ModulusProfile, Notion, Status, Verdict, WitnessCheck, WorkCounters,
};
use symcont::domains::DomainSpec;
use symcont::functions::FuncSpec;
use symcont::zoo::ZooTable;

pub const SCHEMA_VERSION: u32 = 1;

const TEXT_TERMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InputEcho {
    pub domain: DomainSpec,
    pub function: FuncSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_b: Option<DomainSpec>,
}

/// A witness serialized to JSON, read back and re-checked from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct WitnessReplay {
    pub subject: String,
    pub notion: Notion,
    pub check: WitnessCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    pub config: AnalysisConfig,
    pub verdicts: Vec<Verdict>,
    pub profiles: Vec<ModulusProfile>,
    /// Computed verdicts that break the implication lattice.
    pub conflicts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub work: Option<WorkCounters>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zoo: Option<ZooTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness_checks: Vec<WitnessReplay>,
    pub notices: Vec<String>,
    /// Present only when asked for; everything else is deterministic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: &str, config: &AnalysisConfig) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            input: None,
            config: config.clone(),
            verdicts: Vec::new(),
            profiles: Vec::new(),
            conflicts: Vec::new(),
            work: None,
            zoo: None,
            witness_checks: Vec::new(),
            notices: Vec::new(),
            timing: None,
        }
    }

    /// Fill `notices` from the truncation flags of verdicts and profiles.
    pub fn collect_notices(&mut self) {
        for v in &self.verdicts {
            if let Status::NoViolationAtResolution { resolution } = &v.status {
                let mut line = format!("{}: no violation at this resolution", v.notion);
                if resolution.truncated {
                    line.push_str(", inspection was truncated");
                }
                if !resolution.note.is_empty() {
                    let _ = write!(line, " ({})", resolution.note);
                }
                self.notices.push(line);
            }
        }
        for p in &self.profiles {
            if p.truncated {
                self.notices.push(format!("{} modulus values are lower bounds", kind_name(p.kind)));
            }
        }
        if self.work.as_ref().is_some_and(|w| w.truncated) {
            self.notices.push("an enumeration or pair budget was exhausted".into());
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(input) = &self.input {
            let _ = writeln!(out, "domain: {}", compact(&input.domain));
            let _ = writeln!(out, "function: {}", compact(&input.function));
            if let Some(b) = &input.subset_b {
                let _ = writeln!(out, "centres: {}", compact(b));
            }
        }
        if !self.verdicts.is_empty() {
            out.push('\n');
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "{:<10} {}", v.notion.to_string(), v.status.summary());
            if let Some(w) = v.status.witness() {
                if let Some(p) = &w.point {
                    let _ = writeln!(out, "{:<10}   at {p}", "");
                }
                // text output shows the coarse end and the finest term; JSON has all of them
                let n = w.terms.len();
                for (i, t) in w.terms.iter().enumerate() {
                    if n > TEXT_TERMS + 1 && i == TEXT_TERMS {
                        let _ = writeln!(out, "{:<10}   ... {} more", "", n - TEXT_TERMS - 1);
                    }
                    if n > TEXT_TERMS + 1 && i >= TEXT_TERMS && i + 1 < n {
                        continue;
                    }
                    let _ = write!(out, "{:<10}   delta {}: x = {}, y = {}", "", t.delta, t.x, t.y);
                    if let Some(c) = &t.center {
                        let _ = write!(out, ", centre {c}");
                    }
                    let _ = writeln!(out, ", |f(x) - f(y)| = {}", t.oscillation);
                }
            }
        }
        for p in &self.profiles {
            let _ = writeln!(out, "\n{} modulus{}", kind_name(p.kind), if p.truncated { " (lower bound)" } else { "" });
            if let Some(fl) = &p.floor {
                let _ = writeln!(out, "  resolution floor {fl}");
            }
            for e in &p.entries {
                let mark = if e.resolved { "" } else { "  (below floor)" };
                let _ = writeln!(out, "  delta {:<12} {}{mark}", e.delta.to_string(), e.oscillation);
            }
        }
        if let Some(z) = &self.zoo {
            render_zoo(z, &mut out);
        }
        if !self.witness_checks.is_empty() {
            out.push_str("\nwitness replay\n");
            for r in &self.witness_checks {
                let state = if r.check.valid { "valid" } else { "INVALID" };
                let _ = writeln!(out, "  {} {}: {state}, {} terms", r.subject, r.notion, r.check.terms_checked);
                for p in &r.check.problems {
                    let _ = writeln!(out, "    {p}");
                }
            }
        }
        for c in &self.conflicts {
            let _ = writeln!(out, "conflict: {c}");
        }
        if let Some(w) = &self.work {
            let _ = writeln!(out, "\npoints inspected {}, pairs examined {}", w.points_inspected, w.pairs_examined);
        }
        for n in &self.notices {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "elapsed {} ms", t.elapsed_ms);
        }
        out
    }
}

fn kind_name(k: ModulusKind) -> &'static str {
    match k {
        ModulusKind::Uc => "uniform",
        ModulusKind::Sym => "symmetric",
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn render_zoo(z: &ZooTable, out: &mut String) {
    let _ = writeln!(out, "\nseed {}, max pairs {}, enum limit {}\n", z.seed, z.max_pairs, z.enum_limit);
    let _ = writeln!(out, "     {:<8} {:<10} {:<28} {:<22} actual", "example", "subject", "check", "expected");
    for r in &z.rows {
        let _ = writeln!(
            out,
            "{} {:<8} {:<10} {:<28} {:<22} {}",
            if r.matches { "ok  " } else { "FAIL" },
            r.example,
            r.subject,
            r.check,
            r.expected,
            r.actual
        );
    }
    if !z.relations.is_empty() {
        out.push('\n');
    }
    for rel in &z.relations {
        let _ =
            writeln!(out, "({}) {} [{}]", rel.number, rel.statement, if rel.witnessed { "witnessed" } else { "open" });
        for p in &rel.parts {
            let by = if p.established_by.is_empty() { "none".to_string() } else { p.established_by.join(", ") };
            let _ = writeln!(out, "    {} without {}: {by}", p.holds, p.fails);
        }
    }
    let _ = writeln!(out, "\nall rows match: {}", if z.all_match { "yes" } else { "no" });
}
