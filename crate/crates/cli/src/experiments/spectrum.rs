use std::fs::File;
use std::path::Path;
use std::sync::Arc;

use log::info;
use oseen_core::evolution::fmt_float;
use oseen_core::spectrum::{
    fine_resolution, spectrum_sweep, verify_bounds, write_spectrum_csv, ModeForms, RadialGrid, SpectrumResult, Subspace,
};

use super::write_table;
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::summary::{Check, Summary, Tolerance};

pub(crate) const SYMMETRY: f64 = 1e-8;
pub(crate) const SKEW: f64 = 1e-6;
pub(crate) const ORACLE: f64 = 1e-6;
pub(crate) const BOUND_SLACK: f64 = 1e-6;
/// Eigenvalues `−(|n| + 2k)/2`, `k ≤ ORACLE_LEVELS`, are compared at `α = 0`.
const ORACLE_LEVELS: usize = 5;
const ORACLE_MAX_MODE: i32 = 3;

pub fn run(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let n0 = cfg.resolution;
    info!("spectrum sweep: {} modes x {} alphas at N = {n0}", cfg.modes.len(), cfg.alphas.len());
    let results = spectrum_sweep(&cfg.modes, &cfg.alphas, &Subspace::ALL, n0, cfg.workers)?;
    write_spectrum_csv(&results, File::create(out.join("spectrum.csv"))?)?;

    let mut defect_rows = Vec::new();
    for size in [n0, fine_resolution(n0)] {
        let grid = Arc::new(RadialGrid::for_basis(size)?);
        let (mut sym, mut skew) = (0.0f64, 0.0f64);
        for &n in &cfg.modes {
            let forms = ModeForms::new(n, size, grid.clone())?;
            let (s, k) = (forms.symmetry_defect(), forms.skew_defect());
            defect_rows.push(vec![n.to_string(), size.to_string(), fmt_float(s), fmt_float(k)]);
            sym = sym.max(s);
            skew = skew.max(k);
        }
        summary.checks.push(Check::at_most(format!("symmetry_defect_N{size}"), 3, sym, SYMMETRY));
        summary.checks.push(Check::at_most(format!("skew_defect_N{size}"), 3, skew, SKEW));
    }
    write_table(&out.join("defects.csv"), &["n", "resolution", "symmetry_defect", "skew_defect"], defect_rows)?;

    oracle_check(cfg, &results, summary)?;

    let report = verify_bounds(&results, cfg.bound_weight, BOUND_SLACK);
    let mut check = Check::at_most("bound_violations", 5, report.violations.len() as f64, 0.0)
        .detail(format!("{} trusted eigenvalues checked in L2(m), m = {}", report.checked, cfg.bound_weight));
    if let Some(v) = report.violations.first() {
        check = check.detail(format!(
            "first violation: n = {}, alpha = {}, {} subspace, lambda = {} (bound {})",
            v.n,
            v.alpha,
            v.subspace.name(),
            v.lambda,
            v.bound
        ));
    }
    summary.checks.push(check);
    summary.checks.push(Check::at_least("trusted_eigenvalues_checked", 5, report.checked as f64, 1.0));
    if report.untrusted_results > 0 {
        summary.notes.push(format!("{} (n, alpha, subspace) cases had no trusted eigenvalue", report.untrusted_results));
    }
    let strict = Subspace::SecondMomentFree;
    for m in &report.max_real {
        if m.subspace == strict && m.alpha != 0.0 {
            summary.notes.push(format!("second-moment-free gap below -1 at alpha = {}: {:e}", m.alpha, m.gap));
        }
    }
    let rows = report.max_real.iter().map(|m| {
        vec![format!("{:?}", m.alpha), m.subspace.name().to_string(), fmt_float(m.max_re), fmt_float(m.gap)]
    });
    write_table(&out.join("bounds.csv"), &["alpha", "subspace", "max_trusted_re", "gap_to_bound"], rows)?;
    Ok(())
}

fn oracle_check(cfg: &ExperimentConfig, results: &[SpectrumResult], summary: &mut Summary) -> CliResult<()> {
    let modes: Vec<i32> = cfg.modes.iter().copied().filter(|n| n.abs() <= ORACLE_MAX_MODE).collect();
    let extra;
    let pool: Vec<&SpectrumResult> = if cfg.alphas.contains(&0.0) {
        results.iter().filter(|r| r.alpha == 0.0 && r.subspace == Subspace::Full && modes.contains(&r.n)).collect()
    } else {
        extra = spectrum_sweep(&modes, &[0.0], &[Subspace::Full], cfg.resolution, cfg.workers)?;
        extra.iter().collect()
    };
    let mut worst = if pool.is_empty() { f64::NAN } else { 0.0f64 };
    let mut missing = Vec::new();
    for r in pool {
        for k in 0..=ORACLE_LEVELS {
            let exact = -((r.n.unsigned_abs() as usize + 2 * k) as f64) / 2.0;
            match (r.eigenvalues.get(k), r.trusted.get(k)) {
                (Some(l), Some(true)) => worst = worst.max((l - exact).norm()),
                _ => missing.push(format!("n = {}, k = {k}", r.n)),
            }
        }
    }
    let mut check = Check::new("alpha0_oracle_max_abs_error", 4, worst, Tolerance::AtMost { limit: ORACLE });
    if !missing.is_empty() {
        check.passed = false;
        check = check.detail(format!("untrusted or missing levels: {}", missing.join("; ")));
    } else {
        check = check.detail(format!("levels k <= {ORACLE_LEVELS}, |n| <= {ORACLE_MAX_MODE}"));
    }
    summary.checks.push(check);
    Ok(())
}
