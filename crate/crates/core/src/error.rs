use thiserror::Error;

#[derive(Debug, Error)]
pub enum VexError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exponent ordering violated: {0}")]
    Ordering(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("validity error: {0}")]
    Validity(String),
    #[error("bisection bracket not found: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, VexError>;
