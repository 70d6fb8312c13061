use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("zero denominator at position {position}")]
    ZeroDenominator { position: usize },

    #[error("polynomial uses variable id {id} outside a universe of {size} variables")]
    UniverseMismatch { id: usize, size: usize },

    #[error("no assignment for variable id {0}")]
    MissingAssignment(usize),

    #[error("series truncated at t^{have} but t^{need} is required")]
    TruncationTooShort { have: usize, need: usize },

    #[error("Groebner budget of {limit} pair reductions exceeded")]
    BudgetExceeded { limit: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
