use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{what} scan needs {needed} steps, cap is {cap}")]
    CapExceeded { what: &'static str, needed: String, cap: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unknown class id {0}")]
    UnknownClass(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
