use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GpError {
    #[error("matrix is not positive definite (largest jitter tried: {jitter:e})")]
    NotPositiveDefinite { jitter: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("unknown parameter path `{0}`")]
    UnknownPath(String),
    #[error("value {value} for `{path}` violates lower bound {bound}")]
    BoundViolation { path: String, value: f64, bound: f64 },
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("no trainable parameters")]
    NoTrainableParams,
    #[error("duplicate timestamp {0}")]
    DuplicateTimestamp(f64),
    #[error("timestamps must be strictly increasing (index {0})")]
    UnorderedTimestamps(usize),
    #[error("empty timestamp set")]
    EmptyTimestampSet,
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = GpError> = std::result::Result<T, E>;
