//! Library side of the `hamdec` command: file formats and the four
//! subcommands, usable from tests without spawning the binary.

pub mod commands;
pub mod experiment;
pub mod files;

use std::path::Path;

use thiserror::Error;

pub use commands::{cmd_generate, cmd_oracle, cmd_solve, GenerateArgs, SolveArgs};
pub use experiment::{cmd_experiment, run_experiment, ExperimentConfig, SetConfig, Summary};
pub use files::{InstanceFile, ResultRow, WitnessFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl From<hamdec_core::Error> for CliError {
    fn from(e: hamdec_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
