use thiserror::Error;

/// Errors produced by the word, code and subshift machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown token `{token}` at position {position}")]
    Parse { token: String, position: usize },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration of {requested} candidates exceeds the budget of {budget}")]
    Budget { requested: u128, budget: u128 },
    #[error("decode error: {0}")]
    Decode(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
