use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BccError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid code spec: {0}")]
    InvalidSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no correction of weight <= {w_max} reproduces the syndrome")]
    DecodeFail { w_max: usize },
}

pub type Result<T> = std::result::Result<T, BccError>;
