//! Named, reproducible numerical studies built on `oseen-core`.
//!
//! A run resolves an [`ExperimentConfig`], writes `manifest.toml` into the run directory,
//! executes the experiment and finishes with `summary.json` and `checks.csv`. Runtime failures
//! are recorded in the summary and keep whatever tables were already written.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod experiments;
pub mod initial;
pub mod summary;

use log::{error, info};

pub use config::{Experiment, ExperimentConfig, Overrides};
pub use error::{CliError, CliResult};
pub use summary::{Check, Summary, Tolerance};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs one experiment. `Err` means the configuration was rejected before anything ran;
/// failures after that are reported through [`Summary::error`].
pub fn run(cfg: &ExperimentConfig) -> CliResult<Summary> {
    cfg.validate()?;
    let out = cfg.out.clone();
    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("manifest.toml"), cfg.resolved().to_toml()?)?;
    let mut summary = Summary::new(cfg.experiment.name(), cfg.initial_seed());
    if let Err(e) = experiments::dispatch(cfg, &out, &mut summary) {
        error!("{}: {e}", cfg.experiment.name());
        summary.error = Some(e.to_string());
    }
    summary.finish();
    for c in &summary.checks {
        info!("{}", c.line());
    }
    summary.write(&out.join("summary.json"))?;
    summary.write_checks_csv(&out.join("checks.csv"))?;
    Ok(summary)
}
