//! Exact classification of four continuity notions on subsets of the real
//! line: continuity (C), uniform continuity (UC), symmetric continuity (SC)
//! and uniform symmetric continuity (USC), plus USC relative to a set of
//! centres.
//!
//! Everything is computed over Q(sqrt 2) without floating point. Verdicts
//! are three-valued: proven with a certificate, refuted with a witness
//! sequence, or no violation found at the configured resolution.

pub mod analysis;
pub mod domains;
pub mod error;
pub mod exactnum;
pub mod functions;
pub mod zoo;

pub use error::Error;
