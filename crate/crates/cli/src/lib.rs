//! Library half of the `ellint2` command-line tool.
//!
//! The binary in `main.rs` only parses arguments; every subcommand lives here
//! so it can be driven from tests without spawning a process.

pub mod error;
pub mod format;
pub mod grid;
pub mod selftest;
pub mod sweep;

pub use error::{CliError, ExitStatus};
pub use format::fmt_num;
pub use grid::{linspace, GridSpec};

/// Text for stdout plus an optional failure to report after printing it.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    pub fn new(stdout: String, failure: Option<CliError>) -> Self {
        Self { stdout, failure }
    }
}
