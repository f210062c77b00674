//! Command-line front end for the `credence` library: single runs, grid
//! sweeps, evidence selection, threshold searches, heatmaps, two-agent
//! divergence experiments, and canned reproduction bundles.
//!
//! All orchestration here is single-threaded; any data parallelism lives
//! inside the library's grid evaluators. Exit codes: 0 on success, 1 for
//! configuration problems (bad flags, bad config file, mismatched plot
//! axes), 2 for runtime failures (solver errors, I/O).

use std::ffi::OsString;

use clap::Parser;

pub mod cli;
pub mod config;
pub mod plot;
pub mod table;

/// Everything that can go wrong between argument parsing and the last
/// byte written.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The config file (or an inline document) could not be parsed;
    /// carries the position reported by the parser.
    #[error("config parse error: {0}")]
    Parse(String),
    /// A parsed field failed validation; names the offending field.
    #[error("invalid `{field}`: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
    /// The requested plot shape does not match the swept axes.
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
    /// The underlying solver or experiment failed.
    #[error("solver error: {0}")]
    Core(#[from] credence::Error),
    /// Reading input or writing output failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn validation(field: &'static str, message: impl Into<String>) -> Self {
        CliError::Validation {
            field,
            message: message.into(),
        }
    }

    /// Process exit code: 1 for configuration errors, 2 for runtime ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation { .. } | CliError::AxisMismatch(_) => 1,
            CliError::Core(_) | CliError::Io(_) => 2,
        }
    }
}

/// Parses `args` (including the program name) and runs the selected
/// command. Returns the process exit code instead of exiting, so tests can
/// drive it in-process. Diagnostics go to stderr; data goes to stdout or to
/// the requested output files.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match cli::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; anything else is a
            // usage error.
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    1
                }
            };
        }
    };
    match cli::execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
