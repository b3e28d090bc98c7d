use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("unsupported level {level}: {reason}")]
    UnsupportedLevel { level: i64, reason: String },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("truncation insufficient: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
