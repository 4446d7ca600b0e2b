use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller handed in values that do not belong together (mismatched lattices,
    /// wrong step kind, out-of-range indices).
    #[error("usage error: {0}")]
    Usage(String),
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A structural invariant failed; indicates a bug rather than bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
