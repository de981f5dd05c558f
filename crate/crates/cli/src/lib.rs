//! Batch verification front end: reads instance and fixture files, runs the
//! checks of `bigonal-core` and writes deterministic JSON reports.

pub mod args;
pub mod commands;
pub mod generate;
pub mod input;
pub mod report;
pub mod settings;
pub mod verify;

pub use args::Cli;
pub use commands::{run, suite, Output};
pub use report::{Claim, Report, Status};
pub use settings::Settings;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Malformed or invalid input; exit code 2.
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}
