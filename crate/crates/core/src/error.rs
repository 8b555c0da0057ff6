use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain is not enumerable: {0}")]
    NotEnumerable(String),
    #[error("intervals {first} and {second} overlap")]
    OverlappingIntervals { first: usize, second: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("no piece of the function covers {point}")]
    Uncovered { point: String },
    #[error("pieces {first} and {second} both cover {point}")]
    OverlappingPieces { first: usize, second: usize, point: String },
    #[error("evaluation failed at {point}: {reason}")]
    Eval { point: String, reason: String },
    #[error("combinator {op} expects {expected} operands, got {got}")]
    Arity { op: String, expected: String, got: usize },
    #[error("{point} belongs to the centre set but not to the ambient domain")]
    NotSubset { point: String },
    #[error("unknown example id {0:?}")]
    UnknownExample(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("spec file error at line {line}, column {column}: {message}")]
    Spec { line: usize, column: usize, message: String },
    #[error("not applicable: {0}")]
    Inapplicable(String),
}
