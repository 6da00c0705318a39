use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid Lie pair: {0}")]
    InvalidPair(String),
    #[error("weight {weight} exceeds truncation {cap}")]
    WeightOverflow { weight: u32, cap: u32 },
    #[error("truncation too small: need N >= {required}, got {given}")]
    TruncationTooSmall { required: u32, given: u32 },
    #[error("series did not terminate within {0} steps")]
    Filtration(usize),
    #[error("pair is not matched: {0}")]
    NotMatched(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Other(String),
}
