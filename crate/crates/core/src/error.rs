use thiserror::Error;

/// Errors produced by the analysis, sampling and oracle routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid pattern graph: {0}")]
    InvalidPattern(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeds cap: {actual} > {cap}")]
    CapExceeded {
        what: &'static str,
        actual: u128,
        cap: u128,
    },

    #[error("enumeration budget exceeded: {detail}")]
    BudgetExceeded { detail: String },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("regime check failed: {0}")]
    Regime(String),
}

impl Error {
    /// True for refusals caused by size caps or enumeration budgets.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
