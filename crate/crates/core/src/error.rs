use thiserror::Error;

use crate::models::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("inductive system shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("endomorphism does not commute with the connecting map at stage {stage}")]
    CommutationFailure { stage: usize },
    #[error("nerve in degree {degree} has {size} simplices, above the bound {bound}")]
    SizeBoundExceeded {
        degree: usize,
        size: u128,
        bound: usize,
    },
    #[error("simplicity not certified: {0}")]
    SimplicityNotCertified(String),
    #[error("group in degree {degree} is not finitely generated; use rational-only mode")]
    NotFinitelyGenerated { degree: usize },
    #[error("groupoid is not principal: unit {unit} has isotropy of order {order}")]
    NotPrincipal { unit: String, order: usize },
    #[error("homology is truncated at degree {0} and vanishing above it is not guaranteed")]
    TruncationUnsound(usize),
    #[error("span boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
