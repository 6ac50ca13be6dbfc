//! Velocity from vorticity: a spectral path with analytic far-field multipoles and a
//! brute-force quadrature oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{moments, Frame, Grid2D, ScalarField, Spectral2D, VectorField, Warning};
use crate::vortex;

/// Largest grid accepted by [`velocity_direct`].
pub const DIRECT_CAP: usize = 64;

/// Edge-to-peak ratio above which a truncation warning is attached.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

/// Gaussian multipole basis of width `σ` centred at `c`, with closed-form velocities.
///
/// Order: `G_σ, F₁σ, F₂σ, ∂₁²G_σ, ∂₂²G_σ, ∂₁∂₂G_σ`.
#[derive(Debug, Clone)]
struct MultipoleBasis {
    sigma: f64,
    center: [f64; 2],
    fields: [Vec<f64>; 6],
    velocities: [[Vec<f64>; 2]; 6],
}

impl MultipoleBasis {
    fn new(grid: &Grid2D, sigma: f64, center: [f64; 2]) -> Self {
        let len = grid.len();
        let mut fields: [Vec<f64>; 6] = Default::default();
        let mut velocities: [[Vec<f64>; 2]; 6] = Default::default();
        for f in fields.iter_mut() {
            f.reserve(len);
        }
        for v in velocities.iter_mut() {
            v[0].reserve(len);
            v[1].reserve(len);
        }
        let s = sigma;
        let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
        for (x, y) in grid.points() {
            let (u, w) = ((x - center[0]) / s, (y - center[1]) / s);
            let g = vortex::gaussian(u, w) / s2;
            let [f1, f2] = vortex::dipole_modes(u, w);
            let h = vortex::hessian_gaussian(u, w);
            let vg = vortex::velocity_gaussian(u, w);
            let [d1, d2] = vortex::velocity_gaussian_gradient(u, w);
            let hv = vortex::velocity_gaussian_hessian(u, w);
            let vals = [g, f1 / s3, f2 / s3, h[0] / s4, h[1] / s4, h[2] / s4];
            let vels = [
                [vg[0] / s, vg[1] / s],
                [-d1[0] / s2, -d1[1] / s2],
                [-d2[0] / s2, -d2[1] / s2],
                [hv[0][0] / s3, hv[0][1] / s3],
                [hv[1][0] / s3, hv[1][1] / s3],
                [hv[2][0] / s3, hv[2][1] / s3],
            ];
            for k in 0..6 {
                fields[k].push(vals[k]);
                velocities[k][0].push(vels[k][0]);
                velocities[k][1].push(vels[k][1]);
            }
        }
        Self { sigma, center, fields, velocities }
    }

    /// Coefficients matching mass, first and second moments of `w` about the centre.
    fn coefficients(&self, w: &ScalarField) -> [f64; 6] {
        let [cx, cy] = self.center;
        let mut m = [0.0; 6];
        for ((x, y), &v) in w.grid().points().zip(w.values()) {
            let (u, z) = (x - cx, y - cy);
            m[0] += v;
            m[1] += u * v;
            m[2] += z * v;
            m[3] += u * u * v;
            m[4] += z * z * v;
            m[5] += u * z * v;
        }
        let h2 = w.grid().cell_area();
        let m = m.map(|s| s * h2);
        let var = self.sigma * self.sigma;
        // ∫ξᵢ² G_σ = 2σ², ∫ξᵢ² ∂ᵢ²G_σ = 2, ∫ξ₁ξ₂ ∂₁∂₂G_σ = 1; the dipoles carry no second moments.
        [m[0], m[1], m[2], 0.5 * (m[3] - 2.0 * var * m[0]), 0.5 * (m[4] - 2.0 * var * m[0]), m[5]]
    }
}

/// Reusable spectral Biot–Savart operator for one grid.
///
/// The field is split as `w = Σ cₖ Bₖ + R` where `Bₖ` are Gaussian multipoles of width `σ` up to
/// second order, centred at a chosen point, with the same mass, first and second moments as `w`. Their velocities are exact;
/// only the remainder `R`, whose far field decays like `|ξ|⁻⁴`, goes through the periodic
/// Fourier multiplier.
#[derive(Debug, Clone)]
pub struct BiotSavart {
    grid: Grid2D,
    fft: Spectral2D,
    basis: MultipoleBasis,
}

impl BiotSavart {
    pub fn new(grid: &Grid2D) -> Self {
        Self::with_scale(grid, 1.0)
    }

    /// Uses multipoles built on `G(ξ/σ)/σ²`.
    pub fn with_scale(grid: &Grid2D, sigma: f64) -> Self {
        Self { grid: *grid, fft: Spectral2D::new(grid), basis: MultipoleBasis::new(grid, sigma, [0.0; 2]) }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn fft(&self) -> &Spectral2D {
        &self.fft
    }

    pub fn scale(&self) -> f64 {
        self.basis.sigma
    }

    pub fn center(&self) -> [f64; 2] {
        self.basis.center
    }

    /// Rebuilds the multipole basis for a new width.
    pub fn set_scale(&mut self, sigma: f64) {
        if sigma != self.basis.sigma {
            self.basis = MultipoleBasis::new(&self.grid, sigma, self.basis.center);
        }
    }

    /// Moves the multipole centre; rebuilds only if it moved by more than `tol·σ`.
    pub fn set_center(&mut self, center: [f64; 2], tol: f64) {
        let [a, b] = self.basis.center;
        if (center[0] - a).hypot(center[1] - b) > tol * self.basis.sigma {
            self.basis = MultipoleBasis::new(&self.grid, self.basis.sigma, center);
        }
    }

    /// Centres the multipoles on the vorticity centroid when the circulation dominates.
    pub fn center_on(&mut self, w: &ScalarField, tol: f64) {
        let m = moments(w);
        let l1: f64 = w.values().iter().map(|v| v.abs()).sum::<f64>() * w.grid().cell_area();
        if m.alpha.abs() > 1e-3 * l1 {
            self.set_center([m.beta1 / m.alpha, m.beta2 / m.alpha], tol);
        }
    }

    /// Velocity of `w` in whatever frame it lives in.
    pub fn velocity(&self, w: &ScalarField) -> Result<VectorField> {
        if w.grid() != &self.grid {
            return Err(Error::GridMismatch("field and Biot-Savart operator grids differ".into()));
        }
        w.ensure_finite()?;
        let c = self.basis.coefficients(w);
        let mut rest = w.values().to_vec();
        let mut v1 = vec![0.0; self.grid.len()];
        let mut v2 = vec![0.0; self.grid.len()];
        for (k, &ck) in c.iter().enumerate().take(6) {
            if ck == 0.0 {
                continue;
            }
            let b = &self.basis.fields[k];
            let [b1, b2] = &self.basis.velocities[k];
            for i in 0..rest.len() {
                rest[i] -= ck * b[i];
                v1[i] += ck * b1[i];
                v2[i] += ck * b2[i];
            }
        }
        let [r1, r2] = self.periodic_velocity(&rest);
        for i in 0..v1.len() {
            v1[i] += r1[i];
            v2[i] += r2[i];
        }
        let mut v = VectorField::new(self.grid, v1, v2)?;
        let ratio = w.boundary_ratio();
        if ratio > TRUNCATION_TOLERANCE {
            v.warnings.push(Warning::Truncation { boundary_ratio: ratio });
        }
        Ok(v)
    }

    /// Multiplier `(i k₂, −i k₁)/|k|²` with the zero mode removed.
    pub fn periodic_velocity(&self, values: &[f64]) -> [Vec<f64>; 2] {
        let n = self.grid.n();
        let k = self.fft.wavenumbers();
        let ko = self.fft.odd_wavenumbers();
        let spec = self.fft.forward(values);
        let mut s1 = spec.clone();
        let mut s2 = spec;
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                let k2 = k[i] * k[i] + k[j] * k[j];
                if k2 == 0.0 {
                    s1[idx] = Complex64::default();
                    s2[idx] = Complex64::default();
                    continue;
                }
                s1[idx] *= Complex64::new(0.0, ko[j] / k2);
                s2[idx] *= Complex64::new(0.0, -ko[i] / k2);
            }
        }
        [self.fft.inverse_real(s1), self.fft.inverse_real(s2)]
    }
}

/// Spectral Biot–Savart velocity of a scaled-frame vorticity.
pub fn velocity_spectral(w: &ScalarField) -> Result<VectorField> {
    w.require_frame(Frame::Scaled)?;
    let mut bs = BiotSavart::new(w.grid());
    bs.center_on(w, 0.0);
    bs.velocity(w)
}

/// Literal quadrature of `v(ξ) = (1/2π) ∫ (ξ−η)^⊥/|ξ−η|² w(η) dη` over the box.
///
/// The singular cell is dropped and replaced by its first-order Taylor contribution
/// `(h²/4π)(∂₂w, −∂₁w)`, with spectral derivatives.
pub fn velocity_direct(w: &ScalarField) -> Result<VectorField> {
    let grid = *w.grid();
    let n = grid.n();
    if n > DIRECT_CAP {
        return Err(Error::OracleCap { n, cap: DIRECT_CAP });
    }
    w.ensure_finite()?;
    let h = grid.spacing();
    let h2 = h * h;
    // kernel (d^⊥/|d|²)/2π on offsets d = (a, b)·h, a, b ∈ (−n, n)
    let m = 2 * n - 1;
    let mut k1 = vec![0.0; m * m];
    let mut k2 = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            let dx = (a as f64 - (n - 1) as f64) * h;
            let dy = (b as f64 - (n - 1) as f64) * h;
            let r2 = dx * dx + dy * dy;
            if r2 > 0.0 {
                k1[a * m + b] = -dy / (2.0 * PI * r2) * h2;
                k2[a * m + b] = dx / (2.0 * PI * r2) * h2;
            }
        }
    }
    let vals = w.values();
    let mut v1 = vec![0.0; n * n];
    let mut v2 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (mut s1, mut s2) = (0.0, 0.0);
            for p in 0..n {
                let row = (i + n - 1 - p) * m + (j + n - 1);
                for q in 0..n {
                    let wv = vals[p * n + q];
                    s1 += k1[row - q] * wv;
                    s2 += k2[row - q] * wv;
                }
            }
            v1[i * n + j] = s1;
            v2[i * n + j] = s2;
        }
    }
    let fft = Spectral2D::new(&grid);
    let [d1, d2] = fft.gradient(&fft.forward(vals));
    let c = h2 / (4.0 * PI);
    for idx in 0..n * n {
        v1[idx] += c * d2[idx];
        v2[idx] -= c * d1[idx];
    }
    VectorField::new(grid, v1, v2)
}

/// `∫ (ξ·v) w dξ`; vanishes when `v` is the Biot–Savart velocity of `w`.
pub fn weighted_virial(w: &ScalarField, v: &VectorField) -> Result<f64> {
    if w.grid() != v.grid() {
        return Err(Error::GridMismatch("vorticity and velocity grids differ".into()));
    }
    let sum: f64 = w
        .grid()
        .points()
        .enumerate()
        .map(|(i, (x, y))| (x * v.v1[i] + y * v.v2[i]) * w.values()[i])
        .sum();
    Ok(sum * w.grid().cell_area())
}

/// Ratio `|v|₄ / |w|_{4/3}` whose boundedness is the Hardy–Littlewood–Sobolev inequality.
pub fn hls_ratio(w: &ScalarField, v: &VectorField) -> f64 {
    let h2 = w.grid().cell_area();
    let v4: f64 = v.v1.iter().zip(&v.v2).map(|(a, b)| (a * a + b * b).powi(2)).sum::<f64>() * h2;
    let w43: f64 = w.values().iter().map(|x| x.abs().powf(4.0 / 3.0)).sum::<f64>() * h2;
    v4.powf(0.25) / w43.powf(0.75)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vortex::{frozen_eigenfunctions, gaussian_G, oseen_velocity_vG};

    #[test]
    fn gaussian_velocity_is_exact() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let v = velocity_spectral(&gaussian_G(&grid)).unwrap();
        let exact = oseen_velocity_vG(&grid);
        assert!(v.relative_l2_error(&exact) < 1e-12);
        assert!(v.warnings.is_empty());
    }

    #[test]
    fn zero_field_gives_zero_velocity() {
        let grid = Grid2D::new(32, 6.0).unwrap();
        let z = ScalarField::zeros(grid, Frame::Scaled, 0.0);
        assert_eq!(velocity_spectral(&z).unwrap().max_speed(), 0.0);
        assert_eq!(velocity_direct(&z).unwrap().max_speed(), 0.0);
    }

    #[test]
    fn shifted_gaussian_matches_closed_form() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let a = 0.5;
        let w = ScalarField::from_fn(grid, |x, y| vortex::gaussian(x - a, y));
        let v = velocity_spectral(&w).unwrap();
        let exact = vortex::sample_vector(&grid, |x, y| vortex::velocity_gaussian(x - a, y));
        let err = v.relative_l2_error(&exact);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn off_centre_pair_matches_closed_form() {
        let grid = Grid2D::new(256, 12.0).unwrap();
        let w = ScalarField::from_fn(grid, |x, y| {
            vortex::gaussian(x - 1.0, y + 0.5) + 0.5 * vortex::gaussian(x + 0.5, y - 0.25)
        });
        let v = velocity_spectral(&w).unwrap();
        let exact = vortex::sample_vector(&grid, |x, y| {
            let a = vortex::velocity_gaussian(x - 1.0, y + 0.5);
            let b = vortex::velocity_gaussian(x + 0.5, y - 0.25);
            [a[0] + 0.5 * b[0], a[1] + 0.5 * b[1]]
        });
        let err = v.relative_l2_error(&exact);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn direct_oracle_against_closed_form() {
        let grid = Grid2D::new(64, 8.0).unwrap();
        let v = velocity_direct(&gaussian_G(&grid)).unwrap();
        let err = v.relative_l2_error(&oseen_velocity_vG(&grid));
        assert!(err < 1e-4, "{err}");
        assert!(velocity_direct(&gaussian_G(&Grid2D::new(128, 8.0).unwrap())).is_err());
    }

    #[test]
    fn dipole_spectral_matches_direct() {
        let grid = Grid2D::new(64, 8.0).unwrap();
        let f1 = frozen_eigenfunctions(&grid).f1;
        let spec = velocity_spectral(&f1).unwrap();
        let direct = velocity_direct(&f1).unwrap();
        let err = direct.relative_l2_error(&spec);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn direct_mirror_symmetry() {
        let grid = Grid2D::new(32, 6.0).unwrap();
        // odd in ξ₁ about the grid's mirror axis (index i ↔ n − i)
        let w = ScalarField::from_fn(grid, |x, y| x * (-(x * x + (y - 0.3).powi(2))).exp());
        let v = velocity_direct(&w).unwrap();
        let n = 32;
        for i in 1..n {
            for j in 0..n {
                let a = i * n + j;
                let b = (n - i) * n + j;
                assert!((v.v1[a] + v.v1[b]).abs() < 1e-12);
                assert!((v.v2[a] - v.v2[b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn virial_of_oseen_pair_vanishes() {
        let grid = Grid2D::new(64, 12.0).unwrap();
        let g = gaussian_G(&grid);
        assert!(weighted_virial(&g, &oseen_velocity_vG(&grid)).unwrap().abs() < 1e-15);
    }
}
