//! Std companion of `slag-core`: configuration, parallel drivers, reports,
//! data exports and the command implementations behind the `slag` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod parallel;
pub mod report;

pub use config::{ConfigOverrides, RunConfig};
pub use error::{CliError, ExitCode};
pub use report::{Check, Report, Stats, Status};
