use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An element outside the carrier of the operation it was given to.
    #[error("domain error: {0}")]
    Domain(String),

    /// The structure itself is ill-formed: an empty hyperoperation result,
    /// a result outside the carrier, a missing table cell.
    #[error("malformed structure: {0}")]
    Malformed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("contradiction: {0}")]
    Contradiction(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("input not linearly independent: {0}")]
    NotIndependent(String),

    #[error("length mismatch: {left} coefficients for {right} vectors")]
    LengthMismatch { left: usize, right: usize },

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
