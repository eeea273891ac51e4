use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scenario '{scenario}': {source}")]
    Scenario {
        scenario: String,
        source: condenlab::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("network file {}: {source}", path.display())]
    Network {
        path: PathBuf,
        source: condenlab::Error,
    },
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: everything here is a usage or input problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
