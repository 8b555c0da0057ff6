//! Spec-file parsing, reports and the commands behind the `symcont` binary.

mod commands;
pub mod report;
pub mod spec;

pub use commands::{analyze, moduli, zoo, Outcome};
pub use report::Report;
pub use spec::{parse_spec, AnalysisSpec};
