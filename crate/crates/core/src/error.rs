use thiserror::Error;

/// Errors raised by the computational engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input was zero (or otherwise degenerate) where a nonzero value is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A division that had to be exact left a remainder.
    #[error("not divisible: {0}")]
    NotDivisible(String),

    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition stated by the caller does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A mathematical hypothesis required by a formula does not hold for the input.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Two routes that must agree did not, or an asserted integrality failed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// The requested computation exceeds a configured size limit.
    #[error("resource limit: {what} needs dimension {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: usize,
        limit: usize,
    },

    /// A polynomial expression could not be parsed.
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
