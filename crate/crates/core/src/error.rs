use thiserror::Error;

/// Errors raised by the graph model, generators, formulations and drivers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An internal invariant failed; indicates a bug rather than bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Ilp(#[from] crate::ilp::IlpError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
