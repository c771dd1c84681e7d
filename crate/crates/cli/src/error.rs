use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod status {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const COUNTEREXAMPLES: i32 = 3;
    pub const BUDGET_EXCEEDED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error(transparent)]
    Core(#[from] efg_core::Error),
}

impl CliError {
    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Usage(_) => status::USAGE,
            CliError::Core(efg_core::Error::BudgetExceeded { .. }) => status::BUDGET_EXCEEDED,
            _ => status::INVALID_INPUT,
        }
    }
}

impl From<efg_core::TreeError> for CliError {
    fn from(e: efg_core::TreeError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<efg_core::StrategyError> for CliError {
    fn from(e: efg_core::StrategyError) -> Self {
        CliError::Core(e.into())
    }
}
