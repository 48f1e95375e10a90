use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config file {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`")]
    ConfigSyntax { path: PathBuf, line: usize },
    #[error("invalid argument: {0}")]
    Arguments(String),
    #[error("invalid study: {0}")]
    Study(ifem_core::Error),
    #[error("solver failure: {0}")]
    Solver(ifem_core::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("malformed table: {0}")]
    Table(#[from] csv::Error),
}

impl CliError {
    /// Process exit status: 2 for solver failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(_) => 2,
            _ => 1,
        }
    }
}

impl From<ifem_core::Error> for CliError {
    fn from(e: ifem_core::Error) -> Self {
        match e {
            ifem_core::Error::SolverDidNotConverge { .. } => CliError::Solver(e),
            other => CliError::Study(other),
        }
    }
}
