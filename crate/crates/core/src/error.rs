use thiserror::Error;

use crate::search::ExtremalCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invariant factors must form a divisibility chain: {0} does not divide {1}")]
    DivisibilityViolation(u64, u64),

    #[error("rank mismatch: expected {expected} coordinates, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("coordinate {coord} at position {position} is not reduced modulo {modulus}")]
    InvalidElement {
        position: usize,
        coord: u64,
        modulus: u64,
    },

    #[error("group order overflows a machine word")]
    GroupTooLarge,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search budget exhausted before the search space was covered")]
    BudgetExceeded(Box<ExtremalCertificate>),

    #[error("certificate is not exhaustive")]
    NonExhaustiveCertificate,

    #[error("D0 oracle failed: {0}")]
    OracleFailure(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("checkpoint does not match this run: {0}")]
    CheckpointMismatch(String),
}
