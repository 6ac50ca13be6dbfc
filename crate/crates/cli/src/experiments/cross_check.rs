use std::fs::File;
use std::path::Path;

use log::info;
use oseen_core::evolution::{fmt_float, simulate, simulate_unscaled, TrajectoryRecord};
use oseen_core::fields::resample_to;
use oseen_core::{Frame, Grid2D};

use super::{note_warnings, write_table};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::initial::build_initial;
use crate::summary::{Check, Summary};

pub(crate) const AGREEMENT: f64 = 1e-4;

pub fn run(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let grid = cfg.grid()?;
    let w0 = build_initial(&cfg.initial, &grid, cfg.initial_seed())?;
    let scfg = cfg.solver_config(false);
    let physical = Grid2D::new(cfg.grid.n, cfg.unscaled_half_width)?;
    let t0 = scfg.clock.t(0.0);
    let omega0 = resample_to(&w0, &physical, 1.0)?.with_frame(Frame::Unscaled, t0)?;
    note_warnings(summary, "initial", &omega0.warnings);
    let t_end = scfg.clock.t(scfg.end_tau);
    info!("cross-check: scaled run to tau = {}, physical run from t = {t0} to {t_end}", scfg.end_tau);
    let scaled = || simulate(&w0, &scfg);
    let unscaled = || simulate_unscaled(&omega0, t_end, &scfg, &grid);
    let (rs, ru) = if cfg.workers > 1 {
        std::thread::scope(|s| {
            let h = s.spawn(unscaled);
            let a = scaled();
            (a, h.join().expect("unscaled run panicked"))
        })
    } else {
        (scaled(), unscaled())
    };
    let (rs, ru) = (rs?, ru?);
    rs.write_csv(File::create(out.join("trajectory_scaled.csv"))?)?;
    ru.write_csv(File::create(out.join("trajectory_unscaled.csv"))?)?;
    note_warnings(summary, "scaled", &rs.warnings);
    note_warnings(summary, "unscaled", &ru.warnings);
    for rec in [&rs, &ru] {
        if let Some(a) = &rec.abort {
            return Err(CliError::Aborted { step: a.step, tau: a.tau, reason: a.reason.clone() });
        }
    }
    compare(&rs, &ru, scfg.end_tau, out, summary)
}

fn compare(rs: &TrajectoryRecord, ru: &TrajectoryRecord, end_tau: f64, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let j = rs
        .norm_weights
        .iter()
        .position(|&m| m == 0.0)
        .ok_or_else(|| CliError::Config("norm_weights must contain 0".into()))?;
    let mut rows = Vec::new();
    let mut worst = if rs.taus.is_empty() { f64::NAN } else { 0.0f64 };
    for (k, &t) in rs.taus.iter().enumerate() {
        if t > end_tau + 1e-9 {
            break;
        }
        let Some(ku) = ru.taus.iter().position(|&tu| (tu - t).abs() < 1e-9) else {
            return Err(CliError::Rejected(format!("the physical run has no sample at tau = {t}")));
        };
        let (a, b) = (rs.residuals[k][j], ru.residuals[ku][j]);
        let rel = (a - b).abs() / a.abs();
        worst = worst.max(rel);
        rows.push(vec![fmt_float(t), fmt_float(a), fmt_float(b), fmt_float(rel)]);
    }
    summary.checks.push(
        Check::at_most("scaled_vs_unscaled_resid_m0_rel", 10, worst, AGREEMENT)
            .detail(format!("{} common samples on tau in [0, {end_tau}]", rows.len())),
    );
    write_table(&out.join("cross_check.csv"), &["tau", "scaled_resid_m0", "unscaled_resid_m0", "rel_diff"], rows)?;
    Ok(())
}
