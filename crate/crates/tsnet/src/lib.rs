//! Experiment runner for the `tsnet-core` analysis: configuration files,
//! parameter sweeps with optional Monte Carlo columns, CSV output, the
//! validation table and the bundled figure presets.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;
pub mod sweep;
pub mod validate;

use std::path::PathBuf;

pub use config::{Config, ConfigError, SimSettings, SweepKind, SweepSpec};
pub use runner::Rayon;
pub use sweep::{run_sweep, RunOptions, SweepRow, SweepTable};
pub use validate::{validate, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] tsnet_core::Error),
}
