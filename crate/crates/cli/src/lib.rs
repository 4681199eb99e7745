//! Command-line front end for `fiberforge` and the acceptance corpus.

pub mod commands;
pub mod config;
pub mod corpus;

use clap::Parser;
use thiserror::Error;

pub use commands::{Cli, Report};
pub use config::{OutputFormat, RunConfig};

/// Exit status for usage errors and malformed input.
pub const EXIT_INPUT: i32 = 1;
/// Exit status for well-formed requests whose computation failed.
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code with what would be printed.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let cfg = cli.config();
    if let Err(e) = cfg.validate() {
        return Outcome { code: e.exit_code(), stdout: String::new(), stderr: e.to_string() };
    }
    match commands::execute(&cli, &cfg) {
        Ok(report) => Outcome {
            code: if report.ok { 0 } else { EXIT_COMPUTATION },
            stdout: report.render(cfg.format),
            stderr: String::new(),
        },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: e.to_string() },
    }
}
