use approx::assert_relative_eq;
use oseen_core::evolution::{semigroup_S, simulate, simulate_unscaled, SolverConfig};
use oseen_core::fields::{moments, resample_to, weighted_norm};
use oseen_core::vortex::{frozen_eigenfunctions, gaussian, oseen_unscaled, VortexParams};
use oseen_core::{Frame, Grid2D, ScalarField};

#[test]
fn heat_semigroup_scales_frozen_modes() {
    let grid = Grid2D::new(128, 12.0).unwrap();
    let fe = frozen_eigenfunctions(&grid);
    for (f, lambda) in fe.with_eigenvalues() {
        for tau in [0.3, 1.7] {
            let s = semigroup_S(f, tau).unwrap();
            let err = s.add_scaled(-(lambda * tau).exp(), f).unwrap();
            let rel = weighted_norm(&err, 0.0).unwrap() / weighted_norm(f, 0.0).unwrap();
            assert!(rel < 1e-12, "eigenvalue {lambda}, tau {tau}: {rel:e}");
        }
    }
}

#[test]
fn physical_integrator_reproduces_the_oseen_vortex() {
    let physical = Grid2D::new(128, 24.0).unwrap();
    let scaled = Grid2D::new(128, 12.0).unwrap();
    let alpha = 3.0;
    let (omega0, _) = oseen_unscaled(&physical, 1.0, VortexParams { alpha }).unwrap();
    let cfg = SolverConfig { dt: 0.02, record_every: 10, end_tau: 1.0, snapshots: true, ..SolverConfig::default() };
    let t_end = 1.0f64.exp();
    let rec = simulate_unscaled(&omega0, t_end, &cfg, &scaled).unwrap();
    assert!(rec.abort.is_none());
    let last = rec.physical.last().unwrap();
    assert_relative_eq!(last.t, t_end, max_relative = 1e-14);
    let (exact, _) = oseen_unscaled(&physical, last.t, VortexParams { alpha }).unwrap();
    let got = last.snapshot.as_ref().unwrap();
    let err = got.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-6 * exact.max_abs(), "{err:e}");
    for (m, p) in rec.moments.iter().zip(&rec.physical) {
        assert_relative_eq!(m.alpha, alpha, max_relative = 1e-10);
        assert_relative_eq!(p.mass, alpha, max_relative = 1e-10);
    }
}

#[test]
fn scaled_run_keeps_first_moments_on_the_exponential() {
    let grid = Grid2D::new(64, 12.0).unwrap();
    let w0 = ScalarField::from_fn(grid, |x, y| gaussian(x - 0.3, y + 0.2));
    let cfg = SolverConfig { dt: 0.02, record_every: 5, end_tau: 1.0, ..SolverConfig::default() };
    let rec = simulate(&w0, &cfg).unwrap();
    for (t, m) in rec.taus.iter().zip(&rec.moments) {
        let e = (-t / 2.0f64).exp();
        assert!((m.beta1 - 0.3 * e).abs() < 1e-10 && (m.beta2 + 0.2 * e).abs() < 1e-10, "{t}");
        assert!((m.alpha - 1.0).abs() < 1e-12);
    }
    // scaled and physical views of the same datum coincide at t = 1
    let physical = Grid2D::new(64, 24.0).unwrap();
    let omega = resample_to(&w0, &physical, 1.0).unwrap().with_frame(Frame::Unscaled, 1.0).unwrap();
    assert_relative_eq!(moments(&omega).alpha, 1.0, max_relative = 1e-12);
}
