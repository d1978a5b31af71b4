use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable or parameter `{0}` has no value at the sample point")]
    UnassignedVariable(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("probe exhausted after {attempts} attempts: {reason}")]
    ProbeExhausted { attempts: usize, reason: String },

    #[error("derivation order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch { expected: String, found: String },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("speed limit breached at t = {t}: |v| = {speed}")]
    SpeedLimitBreached { t: f64, speed: f64 },

    #[error("non-finite state: {0}")]
    NonFiniteState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
