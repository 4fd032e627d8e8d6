use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Failure = 1,
    Domain = 2,
    Convergence = 3,
    Io = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ellint2::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("no admissible points: every grid point violates |a| + |b| <= 1")]
    NoAdmissiblePoints,

    #[error("{count} evaluation(s) did not converge")]
    NotConverged { count: usize },

    #[error("max_rel_dev {dev:e} exceeds --fail-above {limit:e}")]
    Threshold { dev: f64, limit: f64 },

    #[error("{failed} self-test check(s) failed")]
    SelftestFailed { failed: usize },
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Core(e) if e.is_convergence() => ExitStatus::Convergence,
            CliError::Core(_) => ExitStatus::Domain,
            CliError::Io { .. } => ExitStatus::Io,
            CliError::Usage(_) | CliError::NoAdmissiblePoints => ExitStatus::Domain,
            CliError::NotConverged { .. } => ExitStatus::Convergence,
            CliError::Threshold { .. } | CliError::SelftestFailed { .. } => ExitStatus::Failure,
        }
    }
}
