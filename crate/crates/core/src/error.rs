use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("form is degenerate")]
    Degenerate,

    #[error("|A| = {order} exceeds the enumeration cap {cap}")]
    OrderCap { order: u64, cap: u64 },

    #[error("isometry search exceeded its budget of {budget} partial assignments")]
    SearchBudget { budget: u64 },

    #[error("{0} is not an isometry of the form")]
    NotAnIsometry(String),

    #[error("form is not 2-elementary")]
    NotTwoElementary,

    #[error("weight must satisfy l >= 2 (got 2l = {0})")]
    WeightTooSmall(i64),

    #[error("bad word: {0}")]
    Word(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::OrderCap { .. } | Error::SearchBudget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
