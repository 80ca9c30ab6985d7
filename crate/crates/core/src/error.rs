use thiserror::Error;

pub type Result<T> = std::result::Result<T, QssError>;

#[derive(Debug, Error)]
pub enum QssError {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("matrix is not Hermitian (max |h - h^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigen solver did not converge after {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("empty vector set")]
    EmptySet,

    #[error("state is not normalized (norm^2 = {norm_sqr:.12})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid register target: {0}")]
    BadTarget(String),

    #[error("invalid attack spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("spec is not unitarily realizable: {0}")]
    NotRealizable(String),

    #[error("session aborted in round {round}: {reason}")]
    SessionAborted { round: usize, reason: String },

    #[error("quantity undefined: {0}")]
    Undefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
