use thiserror::Error;

use crate::board::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field {field}: {message}")]
    Field { field: String, message: String },

    #[error("invalid bit string {0:?}: only '0' and '1' are allowed")]
    BitString(String),

    #[error("board failed validation: {}", summarize(.0))]
    Validation(Vec<Violation>),

    #[error("unknown region {0:?}")]
    UnknownRegion(String),

    #[error("unknown crossing {0:?}")]
    UnknownCrossing(String),

    #[error("malformed embedding: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("rule violation: {0}")]
    Rule(String),

    #[error("the game is over")]
    Terminal,

    #[error("invalid strategy: {0}")]
    Strategy(String),

    #[error("domain error: {0}")]
    Domain(String),
}

fn summarize(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
