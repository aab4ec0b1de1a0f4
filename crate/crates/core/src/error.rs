use thiserror::Error;

/// Errors raised by constructions and checks in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Shape mismatch, missing argument, or an input violating a documented
    /// precondition.
    #[error("usage error: {0}")]
    Usage(String),
    /// A value outside the domain an operation is defined on, e.g. a weight
    /// that is not in (1/N)Z.
    #[error("domain error: {0}")]
    Domain(String),
    /// A document that does not match its schema; `path` locates the field.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
