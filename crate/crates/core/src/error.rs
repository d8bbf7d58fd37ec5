use thiserror::Error;

/// Errors raised by the expansion engine, the family constructors and the scans.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("{0} is a perfect square; its square root has no periodic expansion")]
    SquareInput(String),
    #[error("budget exceeded: {what} needs more than {limit}")]
    BudgetExceeded { what: String, limit: u64 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("parameter outside the family domain: {0}")]
    DomainError(String),
}

pub type Result<T, E = CfError> = std::result::Result<T, E>;
