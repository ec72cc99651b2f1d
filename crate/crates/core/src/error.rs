use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The codespace projection has (numerically) zero weight, so the output
    /// state cannot be normalised.
    #[error("non-positive success probability (a + b = {0:e})")]
    NonPositiveSuccessProbability(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("curves do not cross on the search grid")]
    NoCrossover,
}
