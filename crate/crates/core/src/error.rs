use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} input bits, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("truth table has no output for input pattern {pattern}")]
    UnobservedPattern { pattern: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dataset has no rows")]
    EmptyDataset,

    #[error("no such column: {0}")]
    InvalidColumn(String),

    #[error("column sets refer to different datasets")]
    DatasetMismatch,

    #[error("column {column} has {alphabet} symbols, a Boolean column is required")]
    NonBoolean { column: String, alphabet: usize },

    #[error("combinatorial budget exceeded: {subsets} subsets requested, limit is {budget}")]
    BudgetExceeded { subsets: u128, budget: u128 },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
