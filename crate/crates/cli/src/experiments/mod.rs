//! The named studies. Each one writes its tables into the run directory and appends its
//! assertions to the summary.

mod convergence;
mod cross_check;
mod decay;
mod entropy;
mod identities;
mod spectrum;

use std::path::Path;

use oseen_core::Warning;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliResult;
use crate::summary::Summary;

pub use convergence::run as convergence;
pub use cross_check::run as cross_check;
pub use decay::run as linear_decay;
pub use entropy::run as entropy;
pub use identities::run as vortex_identities;
pub use spectrum::run as spectrum_sweep;

pub(crate) fn dispatch(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    match cfg.experiment {
        Experiment::VortexIdentities => vortex_identities(cfg, out, summary),
        Experiment::Convergence => convergence(cfg, out, summary),
        Experiment::Entropy => entropy(cfg, out, summary),
        Experiment::SpectrumSweep => spectrum_sweep(cfg, out, summary),
        Experiment::LinearDecay => linear_decay(cfg, out, summary),
        Experiment::CrossCheck => cross_check(cfg, out, summary),
    }
}

fn note_warnings(summary: &mut Summary, source: &str, warnings: &[Warning]) {
    for w in warnings {
        let line = format!("{source}: {w:?}");
        if !summary.warnings.contains(&line) {
            summary.warnings.push(line);
        }
    }
}

fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
