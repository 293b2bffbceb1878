//! Error taxonomy mapped onto process exit codes.

use std::fmt;

/// Exit code for configuration problems (unreadable file, parse error,
/// schema violation, kind/subcommand mismatch).
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for numeric failures inside an experiment and for output IO.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Rejected before any computation; the message is line-anchored when
    /// it comes from the TOML parser.
    Config(String),
    /// An experiment driver failed mid-run.
    Runtime(randtensor::Error),
    /// Writing results failed after the computation succeeded.
    Output(std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) | CliError::Output(_) => EXIT_RUNTIME,
        }
    }

    /// Multi-line report for stderr: one headline, then indented detail.
    pub fn report(&self) -> String {
        match self {
            CliError::Config(msg) => format!("config error: {msg}"),
            CliError::Runtime(e) => format!("numeric error\n  cause: {e}"),
            CliError::Output(e) => format!("output error\n  cause: {e}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

impl std::error::Error for CliError {}

impl From<randtensor::Error> for CliError {
    fn from(e: randtensor::Error) -> Self {
        CliError::Runtime(e)
    }
}
