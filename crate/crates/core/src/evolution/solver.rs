//! Strang-split integrator for the rescaled equation and its linearization.

use num_complex::Complex64;

use super::semigroup::Semigroup;
use super::{Abort, Dealias, SolverConfig, TrajectoryRecord};
use crate::biot_savart::BiotSavart;
use crate::error::{Error, Result};
use crate::fields::{Frame, Grid2D, ScalarField, Spectral2D, VectorField, Warning};
use crate::vortex;

/// Multipole centre moves trigger a basis rebuild beyond this fraction of `σ`.
const RECENTER_TOL: f64 = 1e-3;

/// Source of the advecting velocity in the nonlinear step.
pub trait VelocityProvider {
    fn velocity(&mut self, w: &ScalarField) -> Result<VectorField>;
}

impl VelocityProvider for BiotSavart {
    fn velocity(&mut self, w: &ScalarField) -> Result<VectorField> {
        self.center_on(w, RECENTER_TOL);
        BiotSavart::velocity(self, w)
    }
}

/// `−v·∇w`, optionally dealiased, with its zero mode removed.
fn advection_tendency(fft: &Spectral2D, w: &[f64], v: &VectorField, dealias: Dealias) -> Vec<f64> {
    let [d1, d2] = fft.gradient(&fft.forward(w));
    let prod: Vec<f64> = (0..w.len()).map(|i| -(v.v1[i] * d1[i] + v.v2[i] * d2[i])).collect();
    filter_tendency(fft, &prod, dealias)
}

fn filter_tendency(fft: &Spectral2D, values: &[f64], dealias: Dealias) -> Vec<f64> {
    let mut spec = fft.forward(values);
    if dealias == Dealias::TwoThirds {
        fft.dealias(&mut spec);
    }
    spec[0] = Complex64::default();
    fft.inverse_real(spec)
}

fn axpy(w: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    w.iter().zip(k).map(|(x, y)| x + a * y).collect()
}

/// Classical RK4 on `w' = N(w)`; returns the increment and the largest stage speed.
fn rk4(
    w: &[f64],
    dt: f64,
    mut tendency: impl FnMut(&[f64]) -> Result<(Vec<f64>, f64)>,
) -> Result<(Vec<f64>, f64)> {
    let (k1, s1) = tendency(w)?;
    let (k2, s2) = tendency(&axpy(w, 0.5 * dt, &k1))?;
    let (k3, s3) = tendency(&axpy(w, 0.5 * dt, &k2))?;
    let (k4, s4) = tendency(&axpy(w, dt, &k3))?;
    let out = (0..w.len()).map(|i| w[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect();
    Ok((out, s1.max(s2).max(s3).max(s4)))
}

/// Nonlinear self-similar solver with cached semigroup and Biot–Savart operators.
#[derive(Debug, Clone)]
pub struct ScaledSolver {
    grid: Grid2D,
    dt: f64,
    dealias: Dealias,
    cfl_limit: f64,
    half: Semigroup,
    bs: BiotSavart,
    step: usize,
    warnings: Vec<Warning>,
}

impl ScaledSolver {
    pub fn new(grid: &Grid2D, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            grid: *grid,
            dt: cfg.dt,
            dealias: cfg.dealias,
            cfl_limit: cfg.cfl_limit,
            half: Semigroup::new(grid, 0.5 * cfg.dt),
            bs: BiotSavart::new(grid),
            step: 0,
            warnings: Vec::new(),
        })
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    /// One Strang step `S(dt/2) ∘ A(dt) ∘ S(dt/2)`.
    pub fn step(&mut self, w: &ScalarField) -> Result<ScalarField> {
        if w.grid() != &self.grid {
            return Err(Error::GridMismatch("field grid differs from solver grid".into()));
        }
        w.require_frame(Frame::Scaled)?;
        let step = self.step;
        let half = self.half.apply(w);
        let (grid, dealias, tau) = (self.grid, self.dealias, half.time());
        let fft = self.bs.fft().clone();
        let bs = &mut self.bs;
        let (advected, speed) = rk4(half.values(), self.dt, |u| {
            let field = ScalarField::from_parts(grid, u.to_vec(), Frame::Scaled, tau);
            let v = VelocityProvider::velocity(bs, &field)?;
            Ok((advection_tendency(&fft, u, &v, dealias), v.max_speed()))
        })?;
        let mid = ScalarField::from_parts(grid, advected, Frame::Scaled, tau);
        let mut out = self.half.apply(&mid);
        self.step += 1;
        if out.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::Blowup { step });
        }
        let courant = speed * self.dt / self.grid.spacing();
        if courant > self.cfl_limit {
            let warning = Warning::Cfl { step, courant };
            self.warnings.push(warning.clone());
            out.warnings.push(warning);
        }
        for wn in half.warnings.iter() {
            if !out.warnings.contains(wn) {
                out.warnings.push(wn.clone());
            }
        }
        Ok(out)
    }
}

/// One Strang step with an arbitrary velocity provider.
pub fn step_sv(w: &ScalarField, provider: &mut dyn VelocityProvider, dt: f64) -> Result<ScalarField> {
    w.require_frame(Frame::Scaled)?;
    w.ensure_finite()?;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt = {dt} must be positive")));
    }
    let grid = *w.grid();
    let half = Semigroup::new(&grid, 0.5 * dt);
    let fft = Spectral2D::new(&grid);
    let h = half.apply(w);
    let tau = h.time();
    let (advected, _) = rk4(h.values(), dt, |u| {
        let field = ScalarField::from_parts(grid, u.to_vec(), Frame::Scaled, tau);
        let v = provider.velocity(&field)?;
        Ok((advection_tendency(&fft, u, &v, Dealias::TwoThirds), v.max_speed()))
    })?;
    let out = half.apply(&ScalarField::from_parts(grid, advected, Frame::Scaled, tau));
    if out.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Blowup { step: 0 });
    }
    Ok(out)
}

/// Runs the nonlinear solver from `w0` to `w0.time() + cfg.end_tau`.
///
/// A blow-up stops the run; the samples gathered so far are returned with `abort` set.
pub fn simulate(w0: &ScalarField, cfg: &SolverConfig) -> Result<TrajectoryRecord> {
    w0.require_frame(Frame::Scaled)?;
    w0.ensure_finite()?;
    let mut solver = ScaledSolver::new(w0.grid(), cfg)?;
    let fft = Spectral2D::new(w0.grid());
    let mut record = TrajectoryRecord::new(&cfg.norm_weights);
    record.push(w0, &fft, cfg.snapshots)?;
    let steps = cfg.steps();
    let tau0 = w0.time();
    let mut w = w0.clone();
    for k in 1..=steps {
        match solver.step(&w) {
            Ok(next) => w = next.with_time(tau0 + k as f64 * cfg.dt),
            Err(e) => {
                record.abort = Some(Abort { step: k - 1, tau: w.time(), reason: e.to_string() });
                break;
            }
        }
        if k % cfg.record_every == 0 || k == steps {
            record.push(&w, &fft, cfg.snapshots)?;
        }
    }
    for wn in solver.warnings() {
        if !record.warnings.contains(wn) {
            record.warnings.push(wn.clone());
        }
    }
    Ok(record)
}

/// Linearized flow `∂_τR = ℒR − αΛR` by the same splitting.
#[derive(Debug, Clone)]
pub struct LinearizedSolver {
    grid: Grid2D,
    alpha: f64,
    dt: f64,
    half: Semigroup,
    bs: BiotSavart,
    vg: VectorField,
    grad_g: [Vec<f64>; 2],
}

impl LinearizedSolver {
    pub fn new(grid: &Grid2D, alpha: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("need dt > 0 and finite alpha, got {dt}, {alpha}")));
        }
        let mut g1 = Vec::with_capacity(grid.len());
        let mut g2 = Vec::with_capacity(grid.len());
        for (x, y) in grid.points() {
            let [f1, f2] = vortex::dipole_modes(x, y);
            g1.push(-f1);
            g2.push(-f2);
        }
        Ok(Self {
            grid: *grid,
            alpha,
            dt,
            half: Semigroup::new(grid, 0.5 * dt),
            bs: BiotSavart::new(grid),
            vg: vortex::oseen_velocity_vG(grid),
            grad_g: [g1, g2],
        })
    }

    /// `−αΛR`.
    fn tendency(&self, r: &[f64], tau: f64) -> Result<Vec<f64>> {
        let fft = self.bs.fft();
        let [d1, d2] = fft.gradient(&fft.forward(r));
        let field = ScalarField::from_parts(self.grid, r.to_vec(), Frame::Scaled, tau);
        let v = self.bs.velocity(&field)?;
        let a = self.alpha;
        let out: Vec<f64> = (0..r.len())
            .map(|i| {
                -a * (self.vg.v1[i] * d1[i]
                    + self.vg.v2[i] * d2[i]
                    + v.v1[i] * self.grad_g[0][i]
                    + v.v2[i] * self.grad_g[1][i])
            })
            .collect();
        Ok(filter_tendency(fft, &out, Dealias::TwoThirds))
    }

    pub fn step(&self, r: &ScalarField) -> Result<ScalarField> {
        r.require_frame(Frame::Scaled)?;
        let h = self.half.apply(r);
        let tau = h.time();
        let next = if self.alpha == 0.0 {
            h
        } else {
            let (vals, _) = rk4(h.values(), self.dt, |u| Ok((self.tendency(u, tau)?, 0.0)))?;
            ScalarField::from_parts(self.grid, vals, Frame::Scaled, tau)
        };
        let out = self.half.apply(&next);
        if out.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::Blowup { step: 0 });
        }
        Ok(out)
    }
}

/// One step of the linearized equation around `αG`.
pub fn linearized_step(r: &ScalarField, alpha: f64, dt: f64) -> Result<ScalarField> {
    LinearizedSolver::new(r.grid(), alpha, dt)?.step(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::semigroup_S;
    use crate::fields::{moments, weighted_norm};
    use crate::vortex::{frozen_eigenfunctions, gaussian_G};

    fn grid() -> Grid2D {
        Grid2D::new(128, 12.0).unwrap()
    }

    fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
        weighted_norm(&a.add_scaled(-1.0, b).unwrap(), 0.0).unwrap() / weighted_norm(b, 0.0).unwrap()
    }

    #[test]
    fn vortex_is_a_fixed_point() {
        let g = gaussian_G(&grid()).scaled(3.0);
        let mut bs = BiotSavart::new(&grid());
        let out = step_sv(&g, &mut bs, 0.01).unwrap();
        assert!(out.add_scaled(-1.0, &g).unwrap().max_abs() < 1e-10 * g.max_abs());
    }

    #[test]
    fn step_conserves_mass() {
        let w = ScalarField::from_fn(grid(), |x, y| {
            vortex::gaussian(x - 0.7, y) + 0.4 * vortex::gaussian(x + 0.3, y - 0.9)
        });
        let mut bs = BiotSavart::new(&grid());
        let out = step_sv(&w, &mut bs, 0.05).unwrap();
        assert!((moments(&out).alpha - moments(&w).alpha).abs() < 1e-12);
    }

    #[test]
    fn linearized_frozen_modes() {
        let fe = frozen_eigenfunctions(&Grid2D::new(256, 12.0).unwrap());
        let dt = 0.05;
        for alpha in [0.0, 1.0, 10.0] {
            let s = LinearizedSolver::new(fe.f1.grid(), alpha, dt).unwrap();
            let out = s.step(&fe.f1).unwrap();
            assert!(rel(&out, &fe.f1.scaled((-dt / 2.0).exp())) < 1e-9, "alpha {alpha}");
            let out = s.step(&fe.lap_g).unwrap();
            assert!(rel(&out, &fe.lap_g.scaled((-dt).exp())) < 1e-9, "alpha {alpha}");
        }
    }

    #[test]
    fn zero_alpha_linearized_is_semigroup() {
        let r = ScalarField::from_fn(grid(), |x, y| x * y * (-(x * x + y * y) / 3.0).exp());
        let a = linearized_step(&r, 0.0, 0.1).unwrap();
        let b = semigroup_S(&r, 0.1).unwrap();
        assert!(rel(&a, &b) < 1e-13);
    }
}
