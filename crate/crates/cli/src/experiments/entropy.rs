use std::path::Path;

use oseen_core::evolution::fmt_float;
use oseen_core::lyapunov::{entropy_dissipation_check, explicit_bound, explicit_bound_slack, max_entropy_increase};

use super::convergence::run_trajectory;
use super::write_table;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::summary::{Check, Summary};

pub(crate) const MONOTONE_SLACK: f64 = 1e-8;
pub(crate) const DISSIPATION: f64 = 1e-2;
/// Absolute slack of the per-sample inequalities.
pub(crate) const INEQUALITY_SLACK: f64 = 1e-10;
const FISHER_FLOOR: f64 = 1e-12;

pub fn run(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let rec = run_trajectory(cfg, false, out, summary)?;
    let (h, i): (Vec<f64>, Vec<f64>) = rec
        .entropy
        .iter()
        .zip(&rec.fisher)
        .map(|(h, i)| h.zip(*i))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Rejected("entropy suite needs positive data at every sample".into()))?
        .into_iter()
        .unzip();

    let increase = max_entropy_increase(&rec).unwrap_or(f64::NAN);
    summary.checks.push(Check::at_most("max_entropy_increase", 7, increase, MONOTONE_SLACK));
    let dissipation = entropy_dissipation_check(&rec, FISHER_FLOOR)?;
    summary.checks.push(
        Check::at_most("dissipation_defect_rel", 7, dissipation, DISSIPATION)
            .detail("max |dH/dtau + I| over max I, centred differences"),
    );

    let alpha = rec.moments[0].alpha;
    let tau0 = rec.taus[0];
    let mut rows = Vec::new();
    let (mut ck_min, mut ls_min) = (f64::INFINITY, f64::INFINITY);
    for k in 0..rec.taus.len() {
        let a = rec.moments[k].alpha;
        let gap = h[k] - a * a.ln();
        let ck = gap - rec.l1_residual[k].powi(2) / (2.0 * a);
        let ls = i[k] - gap;
        ck_min = ck_min.min(ck);
        ls_min = ls_min.min(ls);
        let bound = explicit_bound(alpha, h[0], rec.taus[k] - tau0);
        rows.push(vec![
            fmt_float(rec.taus[k]),
            fmt_float(h[k]),
            fmt_float(i[k]),
            fmt_float(ck),
            fmt_float(ls),
            fmt_float(bound - rec.l1_residual[k]),
        ]);
    }
    summary.checks.push(
        Check::at_least("csiszar_kullback_min_gap", 7, ck_min, -INEQUALITY_SLACK)
            .detail("min over samples of H - a log a - |w - aG|_1^2 / 2a"),
    );
    summary.checks.push(
        Check::at_least("log_sobolev_min_gap", 7, ls_min, -INEQUALITY_SLACK)
            .detail("min over samples of I - (H - a log a)"),
    );
    summary.checks.push(Check::at_least("explicit_bound_min_slack", 7, explicit_bound_slack(&rec)?, 0.0));
    write_table(&out.join("entropy.csv"), &["tau", "H", "I", "ck_gap", "logsob_gap", "bound_slack"], rows)?;
    Ok(())
}
