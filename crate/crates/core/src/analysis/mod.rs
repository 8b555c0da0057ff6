//! Oscillation moduli, continuity verdicts and the consistency suites.

mod classify;
pub mod config;
mod decision;
mod engine;
mod pointwise;
mod suites;
pub mod verdict;
mod witness;

pub use classify::{check_wrt_subset, classify, ensure_subset};
pub use config::{dyadic_schedule, AnalysisConfig, OutputFormat};
pub use suites::{
    implication_suite, modulus_profile, sym_oscillation, uc_oscillation, uniform_limit_transfer, ImplicationReport,
    ModulusComparison, NamedCheck, Oscillation, TransferReport, TransferRow,
};
pub use verdict::*;
pub use witness::{
    check_sequence, sequence_witness, verify_witness, SequenceCheck, SequenceTerm, WitnessCheck, WitnessSequence,
};
