use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid platform: {0}")]
    InvalidPlatform(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("no active cores (b = 0 and L = 0)")]
    NoActiveCores,

    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),

    #[error("requested {requested} samples but only {available} distinct configurations exist")]
    SampleCountExceedsSpace { requested: usize, available: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("zero actual value at position {0}")]
    ZeroActual(usize),

    #[error("under-determined fit: {0}")]
    Underdetermined(String),

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("power trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
