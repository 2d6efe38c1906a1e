use thiserror::Error;

/// Errors raised by the state engine, gate simulators and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown subsystem `{0}`")]
    UnknownSubsystem(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("subsystem `{label}` has dimension {dimension}; at least 2 is required")]
    InvalidDimension { label: String, dimension: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("operation requires empty loss ledgers")]
    NonEmptyLedger,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("forced outcome {outcome} has zero probability")]
    ImpossibleOutcome { outcome: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
