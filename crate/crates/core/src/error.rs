use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("truncation exceeded: {0}")]
    Truncation(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown identifier `{id}`")]
    UnknownId { line: usize, id: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
