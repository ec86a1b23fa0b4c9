use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("invalid input: {0}")]
    Input(String),
    /// Text that could not be parsed (bad rational, bad JSON, bad CSV).
    #[error("parse error: {0}")]
    Parse(String),
    /// The price matrix violates one of the market axioms needed downstream.
    #[error("price matrix rejected: {0}")]
    Axiom(String),
    /// An enumeration exceeded its budget.
    #[error("budget of {budget} exceeded while processing {context}")]
    Budget { budget: u64, context: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
