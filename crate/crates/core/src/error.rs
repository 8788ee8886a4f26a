use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("moment table too short: need order {needed}, have {available}")]
    InsufficientOrder { needed: u32, available: u32 },
    #[error("singular pivot block {block}")]
    SingularPivot { block: usize },
    #[error("series precision exhausted: {0}")]
    InsufficientPrecision(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
