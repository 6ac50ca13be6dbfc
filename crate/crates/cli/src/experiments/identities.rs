use std::path::Path;

use log::info;
use oseen_core::biot_savart::velocity_spectral;
use oseen_core::evolution::{fmt_float, generator, lambda};
use oseen_core::fields::{moments, weighted_norm, Spectral2D};
use oseen_core::vortex::{frozen_eigenfunctions, gaussian_G, oseen_velocity_vG};

use super::{note_warnings, write_table};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::summary::{Check, Summary};

pub fn run(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let grid = cfg.grid()?;
    info!("vortex identities on a {}^2 grid, half width {}", grid.n(), grid.half_width());
    let g = gaussian_G(&grid);
    summary.checks.push(Check::at_most("integral_G_minus_1", 1, (moments(&g).alpha - 1.0).abs(), 1e-12));

    let vg = oseen_velocity_vG(&grid);
    let v = velocity_spectral(&g)?;
    note_warnings(summary, "velocity_spectral", &v.warnings);
    summary.checks.push(Check::at_most("velocity_spectral_vs_vG_rel_l2", 1, v.relative_l2_error(&vg), 1e-6));

    let fft = Spectral2D::new(&grid);
    let [gx, gy] = fft.gradient(&fft.forward(g.values()));
    let transport = (0..grid.len()).map(|i| (vg.v1[i] * gx[i] + vg.v2[i] * gy[i]).abs()).fold(0.0, f64::max);
    summary.checks.push(Check::at_most("vG_dot_grad_G_max", 1, transport, 1e-10));

    let fe = frozen_eigenfunctions(&grid);
    let names = ["G", "F1", "F2", "lap_G", "diff_G", "mixed_G"];
    let mut rows = Vec::new();
    for ((f, eig), name) in fe.with_eigenvalues().into_iter().zip(names) {
        let lf = generator(f);
        let err = lf.add_scaled(-eig, f)?;
        let rel = weighted_norm(&err, 0.0)? / weighted_norm(f, 0.0)?;
        rows.push(vec![name.to_string(), "L".into(), fmt_float(eig), fmt_float(rel)]);
        summary.checks.push(Check::at_most(format!("generator_{name}_rel"), 2, rel, 1e-8));
    }
    for (f, name) in [(&fe.g, "G"), (&fe.f1, "F1"), (&fe.f2, "F2"), (&fe.lap_g, "lap_G")] {
        let lam = lambda(f)?;
        note_warnings(summary, "lambda", &lam.warnings);
        let rel = weighted_norm(&lam, 0.0)? / weighted_norm(f, 0.0)?;
        rows.push(vec![name.to_string(), "Lambda".into(), fmt_float(0.0), fmt_float(rel)]);
        summary.checks.push(Check::at_most(format!("lambda_{name}_rel"), 2, rel, 1e-6));
    }
    write_table(&out.join("frozen_modes.csv"), &["field", "operator", "eigenvalue", "relative_error"], rows)?;

    // the discrete velocity in the transport term, for comparison only
    let discrete = (0..grid.len()).map(|i| (v.v1[i] * gx[i] + v.v2[i] * gy[i]).abs()).fold(0.0, f64::max);
    summary.notes.push(format!("max |v(G)·∇G| with the spectral velocity: {discrete:e}"));
    Ok(())
}
