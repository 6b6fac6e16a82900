use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecoveryError {
    #[error("invalid gap: {0}")]
    InvalidGap(String),

    #[error("singular system: pivot {pivot:e} at column {column} (dimension {dim})")]
    SingularSystem { dim: usize, column: usize, pivot: f64 },

    #[error("non-finite value produced at index {0}")]
    NonFinite(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("gap order m={m} exceeds the configured cap {cap}")]
    OrderTooLarge { m: usize, cap: usize },

    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),

    #[error("no ground-truth sample stored at index {0}")]
    MissingGroundTruth(i64),

    #[error("empty input")]
    EmptyInput,
}

impl RecoveryError {
    /// Failures of the numerics, as opposed to bad inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            RecoveryError::SingularSystem { .. } | RecoveryError::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, RecoveryError>;
