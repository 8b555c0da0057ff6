//! Analysis spec files: JSON objects naming a domain, a function, an
//! optional centre set and configuration overrides.

use serde::{Deserialize, Serialize};
use symcont::analysis::{ensure_subset, AnalysisConfig};
use symcont::domains::{Domain, DomainSpec};
use symcont::functions::{FuncSpec, Function};
use symcont::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AnalysisSpec {
    pub domain: DomainSpec,
    pub function: FuncSpec,
    /// Centre set for `USC_wrt_B`; must lie inside `domain`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_b: Option<DomainSpec>,
    #[serde(default)]
    pub config: AnalysisConfig,
}

/// Parse and validate a spec file.
///
/// Syntax problems (including unknown keys and malformed numbers) come back
/// as [`Error::Spec`] with a 1-based line and column. Semantic problems keep
/// their own error kind, e.g. [`Error::NotSubset`] naming a point of the
/// centre set outside the domain.
pub fn parse_spec(text: &str) -> Result<AnalysisSpec, Error> {
    let spec: AnalysisSpec = serde_json::from_str(text).map_err(|e| {
        let mut message = e.to_string();
        if let Some(i) = message.rfind(" at line ") {
            message.truncate(i);
        }
        Error::Spec { line: e.line(), column: e.column(), message }
    })?;
    spec.validate()?;
    Ok(spec)
}

impl AnalysisSpec {
    pub fn validate(&self) -> Result<(), Error> {
        self.config.validate_strict()?;
        Domain::compile(&self.domain)?;
        Function::compile(&self.function)?;
        if let Some(b) = &self.subset_b {
            ensure_subset(&self.domain, b, self.config.enum_limit)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input() {
        assert!(matches!(parse_spec(""), Err(Error::Spec { line: 1, .. })));
    }

    #[test]
    fn position_of_unknown_key() {
        let text = "{\n  \"domain\": {\"IntegerWindow\": {\"lo\": 0, \"hi\": 3}},\n  \"colour\": 1\n}";
        match parse_spec(text) {
            Err(Error::Spec { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
