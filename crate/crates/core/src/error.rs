use thiserror::Error;

/// Errors raised by construction, validation and evaluation.
///
/// Indices reported in variants are 1-based, matching the `k` in `P_k`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sequence")]
    Empty,

    #[error("length mismatch: expected {expected}, found {found}")]
    Length { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("inadmissible weights: partial sum P_{index} = {prefix:e} is negative")]
    Inadmissible { index: usize, prefix: f64 },

    #[error("monotonicity violation: {0}")]
    Monotone(crate::model::MonotoneViolation),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate construction: {0}")]
    Degenerate(String),

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid search configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
