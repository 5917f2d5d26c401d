use thiserror::Error;

/// Errors raised by the library. Variants carry enough context to print a
/// useful diagnostic from the CLI without further wrapping.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("indices must be strictly increasing")]
    UnsortedIndices,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a probability distribution: {0}")]
    InvalidPmf(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no solution exists")]
    NoSolution,
}

pub type Result<T> = std::result::Result<T, Error>;
