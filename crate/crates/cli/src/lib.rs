//! Library side of the `runsize` command-line tool: configuration, CSV
//! schemas and the benchmark / estimate / evaluate / report commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod tables;

pub use config::{ExperimentConfig, Overrides};
pub use error::{CliError, Result};
