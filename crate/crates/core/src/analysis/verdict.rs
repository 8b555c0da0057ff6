use serde::{Deserialize, Serialize};

use crate::exactnum::QuadExt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Notion {
    C,
    UC,
    SC,
    USC,
    /// Uniform symmetric continuity with centres restricted to a subset.
    #[serde(rename = "USC_wrt_B")]
    UscWrtB,
}

impl Notion {
    pub const ALL: [Notion; 4] = [Notion::C, Notion::UC, Notion::SC, Notion::USC];

    /// Notions whose witnesses are symmetric pairs.
    pub fn is_symmetric(self) -> bool {
        matches!(self, Notion::SC | Notion::USC | Notion::UscWrtB)
    }

    pub fn is_pointwise(self) -> bool {
        matches!(self, Notion::C | Notion::SC)
    }
}

impl std::fmt::Display for Notion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Notion::C => "C",
            Notion::UC => "UC",
            Notion::SC => "SC",
            Notion::USC => "USC",
            Notion::UscWrtB => "USC_wrt_B",
        })
    }
}

impl std::str::FromStr for Notion {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(Notion::C),
            "uc" => Ok(Notion::UC),
            "sc" => Ok(Notion::SC),
            "usc" => Ok(Notion::USC),
            "usc_wrt_b" => Ok(Notion::UscWrtB),
            _ => Err(crate::Error::Parse(format!("unknown notion {s:?}"))),
        }
    }
}

/// Pair realising an oscillation value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub x: QuadExt,
    pub y: QuadExt,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<QuadExt>,
    pub oscillation: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusEntry {
    pub delta: QuadExt,
    pub oscillation: QuadExt,
    pub witness: Option<PairRecord>,
    /// False when `delta` lies at or below the model's resolution floor.
    pub resolved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulusKind {
    /// `sup |f(x) - f(y)|` over `|x - y| < delta`.
    Uc,
    /// `sup |f(b+h) - f(b-h)|` over centres `b` and `|h| < delta`.
    Sym,
}

/// Oscillation modulus over the delta schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModulusProfile {
    pub kind: ModulusKind,
    pub entries: Vec<ModulusEntry>,
    /// The values are lower bounds: sampling, an enumeration cap or the
    /// pair budget limited what was inspected.
    pub truncated: bool,
    pub exhaustive: bool,
    pub pairs_examined: u64,
    pub floor: Option<QuadExt>,
}

/// One term of a witness sequence: at scale `delta`, the pair `(x, y)` is
/// admissible and oscillates by `oscillation >= epsilon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub delta: QuadExt,
    pub x: QuadExt,
    pub y: QuadExt,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<QuadExt>,
    pub oscillation: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub epsilon: QuadExt,
    /// Point of discontinuity for pointwise notions.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<QuadExt>,
    pub terms: Vec<WitnessTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all_fields = "camelCase")]
pub enum Certificate {
    /// Every pair of distinct points is at least `gap` apart.
    UniformlyDiscrete {
        gap: Option<QuadExt>,
    },
    /// No symmetric pair has its midpoint among the centres.
    MidpointFree {
        points: usize,
    },
    /// Decided from the interval structure and the formulas on each piece.
    IntervalDecision {
        components: usize,
        atoms: usize,
        checked_points: Vec<QuadExt>,
    },
    ImplicationFrom {
        notion: Notion,
    },
    /// Zero oscillation over every pair of an untruncated enumeration.
    ExhaustiveEnumeration {
        points: usize,
        pairs: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all_fields = "camelCase")]
pub enum RefutationBasis {
    /// Oscillation persists down to the finest resolved scale.
    Sweep {
        finest_delta: QuadExt,
        floor: Option<QuadExt>,
    },
    IntervalDecision,
    WitnessSequence {
        label: String,
    },
    ImplicationFrom {
        notion: Notion,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Resolution {
    pub finest_delta: Option<QuadExt>,
    pub finest_oscillation: Option<QuadExt>,
    pub floor: Option<QuadExt>,
    pub truncated: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all_fields = "camelCase")]
pub enum Status {
    Proven { certificate: Certificate },
    Refuted { basis: RefutationBasis, witness: Witness },
    NoViolationAtResolution { resolution: Resolution },
}

impl Status {
    pub fn is_proven(&self) -> bool {
        matches!(self, Status::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Status::Refuted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Proven { .. } => "Proven",
            Status::Refuted { .. } => "Refuted",
            Status::NoViolationAtResolution { .. } => "NoViolationAtResolution",
        }
    }

    /// One-line description: status, certificate kind or refutation basis.
    pub fn summary(&self) -> String {
        match self {
            Status::Proven { certificate } => {
                let c = match certificate {
                    Certificate::UniformlyDiscrete { .. } => "uniformly discrete".to_string(),
                    Certificate::MidpointFree { .. } => "midpoint-free".to_string(),
                    Certificate::IntervalDecision { .. } => "interval decision".to_string(),
                    Certificate::ImplicationFrom { notion } => format!("implied by {notion}"),
                    Certificate::ExhaustiveEnumeration { .. } => "exhaustive enumeration".to_string(),
                };
                format!("Proven ({c})")
            }
            Status::Refuted { basis, witness } => {
                let b = match basis {
                    RefutationBasis::Sweep { .. } => "sweep".to_string(),
                    RefutationBasis::IntervalDecision => "interval decision".to_string(),
                    RefutationBasis::WitnessSequence { label } => label.clone(),
                    RefutationBasis::ImplicationFrom { notion } => format!("implied by {notion}"),
                };
                format!("Refuted ({b}, epsilon {})", witness.epsilon)
            }
            Status::NoViolationAtResolution { resolution } => match &resolution.finest_oscillation {
                Some(o) => format!("NoViolationAtResolution (finest oscillation {o})"),
                None => "NoViolationAtResolution".to_string(),
            },
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Status::Refuted { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub notion: Notion,
    #[serde(flatten)]
    pub status: Status,
}

/// Verdicts for C, UC, SC and USC on one (domain, function) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub verdicts: Vec<Verdict>,
    /// Violations of the implication lattice between computed verdicts.
    pub conflicts: Vec<String>,
    pub work: WorkCounters,
    /// Modulus tables computed along the way.
    #[serde(default)]
    pub profiles: Vec<ModulusProfile>,
}

impl Classification {
    pub fn get(&self, n: Notion) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.notion == n)
    }

    pub fn status(&self, n: Notion) -> Option<&Status> {
        self.get(n).map(|v| &v.status)
    }
}

/// Deterministic work measures (wall time is reported separately, on request).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WorkCounters {
    pub points_inspected: u64,
    pub pairs_examined: u64,
    pub truncated: bool,
}
