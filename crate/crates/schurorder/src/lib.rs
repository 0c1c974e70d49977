//! Scenario files, JSON reports, a parallel suite runner and the command
//! line for `schurorder-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod runner;

pub use schurorder_core as core;

/// Name written into every report.
pub const TOOL: &str = "schurorder";

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Malformed arguments or configuration.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] schurorder_core::Error),
}

impl AppError {
    /// Hypothesis failures map to 2; everything else is a usage or domain
    /// problem and maps to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(schurorder_core::Error::Precondition(_) | schurorder_core::Error::Unverified(_)) => {
                cli::EXIT_INCONSISTENT
            }
            _ => cli::EXIT_ERROR,
        }
    }
}
