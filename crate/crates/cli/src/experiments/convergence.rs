use std::fs::File;
use std::path::Path;

use log::info;
use oseen_core::evolution::{fit_decay_rate, fmt_float, simulate, Quantity, TrajectoryRecord};
use oseen_core::fields::weighted_norm;

use super::{note_warnings, write_table};
use crate::asymptotics::{second_order_asymptotics, NOISE_FLOOR};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::initial::build_initial;
use crate::summary::{Check, Summary};

pub(crate) const MASS_DRIFT: f64 = 1e-10;
pub(crate) const MOMENT_TRACKING: f64 = 1e-6;
pub(crate) const UNDERSHOOT: f64 = 1e-6;

pub(crate) fn run_trajectory(cfg: &ExperimentConfig, snapshots: bool, out: &Path, summary: &mut Summary) -> CliResult<TrajectoryRecord> {
    let grid = cfg.grid()?;
    let w0 = build_initial(&cfg.initial, &grid, cfg.initial_seed())?;
    note_warnings(summary, "initial", &w0.warnings);
    let scfg = cfg.solver_config(snapshots);
    info!("{}: {} steps of dt = {}", cfg.experiment.name(), scfg.steps(), scfg.dt);
    let rec = simulate(&w0, &scfg)?;
    rec.write_csv(File::create(out.join("trajectory.csv"))?)?;
    note_warnings(summary, "solver", &rec.warnings);
    if let Some(a) = &rec.abort {
        return Err(CliError::Aborted { step: a.step, tau: a.tau, reason: a.reason.clone() });
    }
    Ok(rec)
}

/// Mass drift, first-moment tracking and positivity along a record.
pub(crate) fn conservation_checks(rec: &TrajectoryRecord, summary: &mut Summary) {
    let (t0, m0) = (rec.taus[0], rec.moments[0]);
    let drift = rec
        .taus
        .iter()
        .zip(&rec.moments)
        .skip(1)
        .map(|(t, m)| (m.alpha - m0.alpha).abs() / (t - t0))
        .fold(0.0, f64::max);
    summary.checks.push(Check::at_most("mass_drift_per_tau", 8, drift, MASS_DRIFT));
    let beta0 = m0.beta1.hypot(m0.beta2);
    let tracking = rec
        .taus
        .iter()
        .zip(&rec.moments)
        .map(|(t, m)| {
            let e = (-(t - t0) / 2.0).exp();
            let err = (m.beta1 - m0.beta1 * e).hypot(m.beta2 - m0.beta2 * e);
            if beta0 > 0.0 {
                err / (beta0 * e)
            } else {
                err
            }
        })
        .fold(0.0, f64::max);
    let check = Check::at_most("first_moment_tracking_rel", 8, tracking, MOMENT_TRACKING);
    summary.checks.push(if beta0 > 0.0 { check } else { check.detail("beta(0) = 0, absolute error") });
    let undershoot = rec.min_w.iter().zip(&rec.max_w).map(|(lo, hi)| lo / hi).fold(f64::INFINITY, f64::min);
    summary.checks.push(Check::at_least("min_w_over_max_w", 8, undershoot, -UNDERSHOOT));
}

pub fn run(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let rec = run_trajectory(cfg, true, out, summary)?;
    conservation_checks(&rec, summary);
    let window = (cfg.fit_window[0], cfg.fit_window[1]);
    let second = second_order_asymptotics(&rec, window)?;
    let mut fit_rows = Vec::new();
    for (j, &m) in cfg.norm_weights.iter().enumerate() {
        let scale = weighted_norm(&rec.snapshots[0], m)?;
        let peak = rec
            .taus
            .iter()
            .zip(&rec.residuals)
            .filter(|(t, _)| **t >= window.0 && **t <= window.1)
            .map(|(_, r)| r[j])
            .fold(0.0, f64::max);
        if peak <= NOISE_FLOOR * scale {
            summary.notes.push(format!("residual in m = {m} is at the noise floor; first-order fit is degenerate"));
        } else {
            let fit = fit_decay_rate(&rec, &Quantity::Residual(m), window)?;
            fit_rows.push(vec!["residual".into(), fmt_float(m), fmt_float(fit.mu), fmt_float(fit.r_squared), fit.samples.to_string()]);
            summary.checks.push(
                Check::within(format!("residual_rate_m{m}"), 6, fit.mu, 0.45, 0.55)
                    .detail(format!("fit over tau in [{}, {}], r^2 = {:.6}", window.0, window.1, fit.r_squared)),
            );
        }
        match second.fits[j] {
            Some(fit) => {
                fit_rows.push(vec!["second_order".into(), fmt_float(m), fmt_float(fit.mu), fmt_float(fit.r_squared), fit.samples.to_string()]);
                summary.checks.push(
                    Check::within(format!("second_order_rate_m{m}"), 6, fit.mu, 0.9, 1.1)
                        .detail(format!("fit over tau in [{}, {}], r^2 = {:.6}", window.0, window.1, fit.r_squared)),
                );
            }
            None => summary.notes.push(format!("second-order remainder in m = {m} is at the noise floor; fit is degenerate")),
        }
    }
    write_table(&out.join("fits.csv"), &["quantity", "m", "mu", "r_squared", "samples"], fit_rows)?;
    let mut header = vec!["tau".to_string()];
    header.extend(cfg.norm_weights.iter().map(|m| format!("second_order_m{m}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = second.taus.iter().zip(&second.residuals).map(|(t, r)| {
        std::iter::once(fmt_float(*t)).chain(r.iter().copied().map(fmt_float)).collect()
    });
    write_table(&out.join("second_order.csv"), &header, rows)?;
    Ok(())
}
