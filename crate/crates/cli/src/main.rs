//! `solvchaos` command-line front end.
//!
//! Exit status: 0 on success or a passing check, 1 on a failed check or a
//! computation error, 2 on a usage error.

mod args;
mod commands;
mod svg;
mod table;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Fail(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

macro_rules! computation_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Fail(e.to_string())
            }
        }
    )*};
}

computation_errors!(
    solvchaos::maps::MapError,
    solvchaos::degree_growth::DegreeError,
    solvchaos::finite_field_stats::FFError,
    solvchaos::solvability::SolvError,
    solvchaos::elliptic::EllError
);

fn run(cmd: &Command) -> Result<bool, CliError> {
    match cmd {
        Command::Orbit(a) => commands::orbit(a, cmd).map(|_| true),
        Command::Segment(a) => commands::segment(a, cmd).map(|_| true),
        Command::Entropy(a) => commands::entropy_cmd(a, cmd).map(|_| true),
        Command::Ffstats(a) => commands::ffstats(a, cmd).map(|_| true),
        Command::Verify(a) => commands::verify(a, cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
