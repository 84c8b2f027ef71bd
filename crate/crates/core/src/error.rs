use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerically degenerate basis: {0}")]
    Degenerate(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
