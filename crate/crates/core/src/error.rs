use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("system mismatch: {0}")]
    SystemMismatch(String),

    #[error("unsupported composition: {0}")]
    UnsupportedComposition(String),

    #[error("unsupported for this theory: {0}")]
    Unsupported(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size cap exceeded: {what} = {value} > {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
