use thiserror::Error;

use crate::scalar::Kernel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("crossing parameter c must be nonzero")]
    ZeroCrossing,
    #[error("singular pair in {kernel}({left}, {right})")]
    SingularPair { kernel: Kernel, left: String, right: String },
    #[error("repeated entry {0} in a set that must be pairwise distinct")]
    RepeatedEntry(String),
    #[error("genericity violated: {0}")]
    Genericity(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("size {size} exceeds the {mode} ceiling {ceiling}")]
    SizeCeiling { size: usize, ceiling: usize, mode: &'static str },
    #[error("twist is not rank one: {0}")]
    RankViolation(String),
    #[error("zero boundary vector {0}")]
    ZeroVector(&'static str),
    #[error("missing boundary data: {0}")]
    MissingBoundary(&'static str),
    #[error("closed form unavailable: {0}; use the contraction (partition_expectation) route")]
    Unavailable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by a vanishing quantity in the input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_)
                | Error::SingularPair { .. }
                | Error::Singular
                | Error::Unavailable(_)
                | Error::Genericity(_)
                | Error::RepeatedEntry(_)
                | Error::ZeroCrossing
                | Error::ZeroVector(_)
        )
    }
}
