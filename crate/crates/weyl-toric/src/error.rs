use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input: dimension mismatch, unknown pair name,
    /// a point outside a cone, an unsupported parameter.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configurable resource cap was hit before the computation finished.
    #[error("resource budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },

    /// A computed object failed a self-check. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::BudgetExceeded { what: what.into(), limit }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::BudgetExceeded { .. } => 3,
            Error::Invariant(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
