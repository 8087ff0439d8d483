use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precision-zero divisor: inverted a value indistinguishable from 0")]
    PrecisionZeroDivisor,
    #[error("precision: {0}")]
    Precision(String),
    #[error("ill-conditioned at precision: {0}")]
    IllConditioned(String),
    #[error("norm-correction failure: {0}")]
    NormCorrection(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("construction error: {0}")]
    Construction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("order cap exceeded: {order} > {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
