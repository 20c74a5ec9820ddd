use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A dimension exceeds the desk-scale cap or two dimensions disagree.
    #[error("size error: {0}")]
    Size(String),
    /// A subsystem index is out of range or repeated.
    #[error("index error: {0}")]
    Index(String),
    /// An input violates a documented precondition.
    #[error("contract violated: {0}")]
    Contract(String),
    /// The requested quantity has no implemented algorithm for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
