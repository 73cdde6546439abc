use std::path::PathBuf;

use slag_core::Error as CoreError;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    VerificationFailed = 1,
    NoConvergence = 2,
    Config = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config file: {0}")]
    ParseConfig(#[from] toml::de::Error),
    #[error("numerical failure: {0}")]
    Numeric(#[from] CoreError),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Csv(#[from] csv::Error),
    #[error("output error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Numeric(CoreError::NoConvergence(_)) => ExitCode::NoConvergence,
            CliError::Numeric(_) => ExitCode::VerificationFailed,
            _ => ExitCode::Config,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
