use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactnum::QuadExt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Resolution and work limits for one analysis run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Strictly decreasing positive scales.
    pub delta_schedule: Vec<QuadExt>,
    /// Each interval piece is sampled at `2^grid_exponent + 1` grid points.
    pub grid_exponent: u32,
    /// Cap on candidate pairs examined by pair enumeration.
    pub max_pairs: usize,
    /// Cap on points listed from an enumerable domain.
    pub enum_limit: usize,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            delta_schedule: dyadic_schedule(20),
            grid_exponent: 10,
            max_pairs: 1_000_000,
            enum_limit: 100_000,
            seed: 0,
            output_format: OutputFormat::Text,
        }
    }
}

/// `2^-j` for `j = 0..=last`.
pub fn dyadic_schedule(last: u32) -> Vec<QuadExt> {
    let mut out = Vec::with_capacity(last as usize + 1);
    let mut d = QuadExt::one();
    for _ in 0..=last {
        out.push(d.clone());
        d = d.half();
    }
    out
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.delta_schedule.is_empty() {
            return Err(Error::Config("delta schedule is empty".into()));
        }
        if self.delta_schedule.iter().any(|d| d.signum() <= 0) {
            return Err(Error::Config("delta schedule entries must be positive".into()));
        }
        if self.delta_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("delta schedule must be strictly decreasing".into()));
        }
        if self.grid_exponent > 20 {
            return Err(Error::Config("grid exponent above 20 is not supported".into()));
        }
        Ok(())
    }

    /// Validation used for user input, which also rejects zero limits.
    pub fn validate_strict(&self) -> Result<(), Error> {
        self.validate()?;
        if self.max_pairs == 0 || self.enum_limit == 0 {
            return Err(Error::Config("max-pairs and enum-limit must be positive".into()));
        }
        Ok(())
    }

    /// Schedule entries strictly above `floor`.
    pub fn effective_schedule(&self, floor: Option<&QuadExt>) -> Vec<QuadExt> {
        self.delta_schedule.iter().filter(|d| floor.is_none_or(|f| *d > f)).cloned().collect()
    }
}
