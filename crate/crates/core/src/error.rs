use thiserror::Error;

/// Errors raised by the numeric kernel, the classifiers and the front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated (dimension, range, Hermiticity, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// An iterative routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A family descriptor or numeric field could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
