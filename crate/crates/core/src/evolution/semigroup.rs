//! Exact linear semigroup `S(τ) = exp(τℒ)` and the discrete operators `ℒ`, `Λ`.

use num_complex::Complex64;

use crate::biot_savart::BiotSavart;
use crate::error::Result;
use crate::fields::{apply_dilation, Dilation, Frame, Grid2D, ScalarField, Spectral2D};
use crate::vortex;

/// `S(τ)` on one grid with the dilation matrix and heat multiplier precomputed.
///
/// `S(τ)f = e^τ · e^{a(τ)Δ}[f(· e^{τ/2})]` with `a(τ) = 1 − e^{−τ}`.
#[derive(Debug, Clone)]
pub struct Semigroup {
    tau: f64,
    dilation: Dilation,
    fft: Spectral2D,
    multiplier: Vec<f64>,
}

impl Semigroup {
    pub fn new(grid: &Grid2D, tau: f64) -> Self {
        Self::with_diffusivity(grid, tau, 1.0)
    }

    /// Variant with the heat kernel widened by `nu` (used for Carlen–Loss type majorants).
    pub fn with_diffusivity(grid: &Grid2D, tau: f64, nu: f64) -> Self {
        let fft = Spectral2D::new(grid);
        let a = -(-tau).exp_m1() * nu;
        let n = grid.n();
        let k = fft.wavenumbers();
        let mut multiplier = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                multiplier[i * n + j] = (-a * (k[i] * k[i] + k[j] * k[j])).exp() * tau.exp();
            }
        }
        Self { tau, dilation: Dilation::new(grid, grid, (tau / 2.0).exp()), fft, multiplier }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        let dilated = apply_dilation(f, &self.dilation);
        let mut spec = self.fft.forward(dilated.values());
        for (c, m) in spec.iter_mut().zip(&self.multiplier) {
            *c *= Complex64::new(*m, 0.0);
        }
        let mut out = ScalarField::from_parts(*f.grid(), self.fft.inverse_real(spec), f.frame(), f.time() + self.tau);
        out.warnings = dilated.warnings;
        out
    }
}

/// `S(τ)f`; truncation warnings from the dilation are carried over.
#[allow(non_snake_case)]
pub fn semigroup_S(f: &ScalarField, tau: f64) -> Result<ScalarField> {
    f.require_frame(Frame::Scaled)?;
    f.ensure_finite()?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(crate::Error::InvalidArgument(format!("semigroup time {tau} must be positive")));
    }
    Ok(Semigroup::new(f.grid(), tau).apply(f))
}

/// Discrete `ℒw = Δw + ½ξ·∇w + w` with spectral derivatives.
pub fn generator(w: &ScalarField) -> ScalarField {
    let fft = Spectral2D::new(w.grid());
    let spec = fft.forward(w.values());
    let lap = fft.laplacian(&spec);
    let [d1, d2] = fft.gradient(&spec);
    let values = w
        .grid()
        .points()
        .enumerate()
        .map(|(i, (x, y))| lap[i] + 0.5 * (x * d1[i] + y * d2[i]) + w.values()[i])
        .collect();
    ScalarField::from_parts(*w.grid(), values, w.frame(), w.time())
}

/// Discrete `ΛR = v^G·∇R + v(R)·∇G` with the spectral Biot–Savart velocity of `R`.
pub fn lambda(r: &ScalarField) -> Result<ScalarField> {
    let bs = BiotSavart::new(r.grid());
    lambda_with(r, &bs)
}

pub(crate) fn lambda_with(r: &ScalarField, bs: &BiotSavart) -> Result<ScalarField> {
    let fft = bs.fft();
    let [d1, d2] = fft.gradient(&fft.forward(r.values()));
    let v = bs.velocity(r)?;
    let values = r
        .grid()
        .points()
        .enumerate()
        .map(|(i, (x, y))| {
            let vg = vortex::velocity_gaussian(x, y);
            // ∇G = −(F₁, F₂)
            let [f1, f2] = vortex::dipole_modes(x, y);
            vg[0] * d1[i] + vg[1] * d2[i] - (v.v1[i] * f1 + v.v2[i] * f2)
        })
        .collect();
    Ok(ScalarField::from_parts(*r.grid(), values, r.frame(), r.time()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{moments, weighted_norm};
    use crate::vortex::frozen_eigenfunctions;

    fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
        let d = a.add_scaled(-1.0, b).unwrap();
        weighted_norm(&d, 0.0).unwrap() / weighted_norm(b, 0.0).unwrap()
    }

    #[test]
    fn frozen_modes_under_semigroup() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let fe = frozen_eigenfunctions(&grid);
        for tau in [0.05, 0.7, 3.0] {
            for (f, lam) in fe.with_eigenvalues() {
                let out = semigroup_S(f, tau).unwrap();
                let err = rel(&out, &f.scaled((lam * tau).exp()));
                assert!(err < 1e-12, "tau {tau} lam {lam}: {err}");
            }
        }
    }

    #[test]
    fn semigroup_conserves_mass() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let w = ScalarField::from_fn(grid, |x, y| (-(x - 1.0).powi(2) - 0.5 * y * y).exp() * (1.0 + 0.3 * x * y));
        let a = moments(&w).alpha;
        let b = moments(&semigroup_S(&w, 0.8).unwrap()).alpha;
        assert!((a - b).abs() < 1e-13 * a.abs());
    }

    #[test]
    fn frozen_modes_under_generator() {
        let grid = Grid2D::new(256, 12.0).unwrap();
        let fe = frozen_eigenfunctions(&grid);
        for (f, lam) in fe.with_eigenvalues() {
            let lf = generator(f);
            let err = weighted_norm(&lf.add_scaled(-lam, f).unwrap(), 0.0).unwrap() / weighted_norm(f, 0.0).unwrap();
            assert!(err < 1e-10, "{lam}: {err}");
        }
    }

    #[test]
    fn lambda_annihilates_radial_and_dipole_modes() {
        let grid = Grid2D::new(256, 12.0).unwrap();
        let fe = frozen_eigenfunctions(&grid);
        for f in [&fe.g, &fe.f1, &fe.f2, &fe.lap_g] {
            let l = lambda(f).unwrap();
            let err = weighted_norm(&l, 0.0).unwrap() / weighted_norm(f, 0.0).unwrap();
            assert!(err < 1e-8, "{err}");
        }
    }
}
