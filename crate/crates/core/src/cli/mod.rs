//! Command-line driver: `solve`, `sweep`, `greeks`, `bounds` and `validate`.

mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{cmd_bounds, cmd_greeks, cmd_solve, cmd_sweep, cmd_validate};
pub use config::RunConfig;

/// Failures of a CLI run, each with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("{0}")]
    Cfl(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Assumption(_) => 3,
            CliError::Cfl(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Domain(msg) => CliError::Config(msg),
            stability @ crate::Error::Stability { .. } => CliError::Cfl(stability.to_string()),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Run even when `4r ≤ σ²`.
    pub force: bool,
    /// Add bump-and-revalue Vega and Rho to `greeks`.
    pub bumps: bool,
    /// Add `greeks_surface.csv` with Delta, Gamma and Theta on every time row.
    pub full_surface: bool,
    /// Overrides `output_dir` from the config.
    pub out: Option<PathBuf>,
}

impl Options {
    pub(crate) fn output_dir(&self, config: &RunConfig) -> PathBuf {
        self.out
            .clone()
            .or_else(|| config.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("."))
    }
}
