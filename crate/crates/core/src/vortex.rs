//! Closed-form Oseen vortex and the eigenfunctions of `ℒ` frozen by symmetry.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::{Frame, Grid2D, ScalarField, VectorField};

/// Circulation of an Oseen vortex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexParams {
    pub alpha: f64,
}

impl Default for VortexParams {
    fn default() -> Self {
        Self { alpha: 1.0 }
    }
}

/// `G(ξ) = e^{-|ξ|²/4} / 4π`.
pub fn gaussian(x: f64, y: f64) -> f64 {
    (-(x * x + y * y) / 4.0).exp() / (4.0 * PI)
}

/// `[F₁, F₂] = [-∂₁G, -∂₂G] = (ξ/2) G`.
pub fn dipole_modes(x: f64, y: f64) -> [f64; 2] {
    let g = gaussian(x, y);
    [0.5 * x * g, 0.5 * y * g]
}

/// `ΔG = ¼(|ξ|² − 4) G`.
pub fn laplacian_gaussian(x: f64, y: f64) -> f64 {
    0.25 * (x * x + y * y - 4.0) * gaussian(x, y)
}

/// `[∂₁²G, ∂₂²G, ∂₁∂₂G]`.
pub fn hessian_gaussian(x: f64, y: f64) -> [f64; 3] {
    let g = gaussian(x, y);
    [(0.25 * x * x - 0.5) * g, (0.25 * y * y - 0.5) * g, 0.25 * x * y * g]
}

const SERIES_SWITCH: f64 = 8.0;
const SERIES_TERMS: usize = 48;

/// Radial factor `f(q) = (1 − e^{-q/4}) / (2πq)` of `v^G = ξ^⊥ f(|ξ|²)` and its first two
/// derivatives in `q`.
pub(crate) fn radial_factor(q: f64) -> [f64; 3] {
    if q < SERIES_SWITCH {
        // f = (1/8π) Σ (-1)^k (q/4)^k / (k+1)!
        let z = q / 4.0;
        let (mut f, mut f1, mut f2) = (0.0, 0.0, 0.0);
        // c_k = (-1)^k / (k+1)!
        let mut c = 1.0;
        let mut zk = 1.0; // z^k
        let mut zk1 = 0.0; // z^{k-1}
        let mut zk2 = 0.0; // z^{k-2}
        for k in 0..SERIES_TERMS {
            let kf = k as f64;
            f += c * zk;
            f1 += c * kf * zk1;
            f2 += c * kf * (kf - 1.0) * zk2;
            zk2 = zk1;
            zk1 = zk;
            zk *= z;
            c *= -1.0 / (kf + 2.0);
        }
        let s = 1.0 / (8.0 * PI);
        [s * f, s * f1 / 4.0, s * f2 / 16.0]
    } else {
        let e = (-q / 4.0).exp();
        [
            (1.0 - e) / (2.0 * PI * q),
            ((q + 4.0) * e - 4.0) / (8.0 * PI * q * q),
            (1.0 - (1.0 + q / 4.0 + q * q / 32.0) * e) / (PI * q * q * q),
        ]
    }
}

/// `v^G(ξ) = (1/2π) ξ^⊥/|ξ|² (1 − e^{-|ξ|²/4})`; smooth through the origin.
pub fn velocity_gaussian(x: f64, y: f64) -> [f64; 2] {
    let [f, _, _] = radial_factor(x * x + y * y);
    [-y * f, x * f]
}

/// `[∂₁v^G, ∂₂v^G]`, each a 2-vector.
pub fn velocity_gaussian_gradient(x: f64, y: f64) -> [[f64; 2]; 2] {
    let [f, f1, _] = radial_factor(x * x + y * y);
    let perp = [-y, x];
    [
        [perp[0] * 2.0 * x * f1, f + perp[1] * 2.0 * x * f1],
        [-f + perp[0] * 2.0 * y * f1, perp[1] * 2.0 * y * f1],
    ]
}

/// `[∂₁²v^G, ∂₂²v^G, ∂₁∂₂v^G]`.
pub fn velocity_gaussian_hessian(x: f64, y: f64) -> [[f64; 2]; 3] {
    let [_, f1, f2] = radial_factor(x * x + y * y);
    let xi = [x, y];
    let perp = [-y, x];
    let e_perp = [[0.0, 1.0], [-1.0, 0.0]];
    let entry = |i: usize, j: usize| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let s = 2.0 * delta * f1 + 4.0 * xi[i] * xi[j] * f2;
        [
            e_perp[j][0] * 2.0 * xi[i] * f1 + e_perp[i][0] * 2.0 * xi[j] * f1 + perp[0] * s,
            e_perp[j][1] * 2.0 * xi[i] * f1 + e_perp[i][1] * 2.0 * xi[j] * f1 + perp[1] * s,
        ]
    };
    [entry(0, 0), entry(1, 1), entry(0, 1)]
}

/// Velocities of `F₁` and `F₂`, i.e. `-∂ⱼv^G`.
pub fn velocity_dipoles(x: f64, y: f64) -> [[f64; 2]; 2] {
    let [d1, d2] = velocity_gaussian_gradient(x, y);
    [[-d1[0], -d1[1]], [-d2[0], -d2[1]]]
}

#[allow(non_snake_case)]
pub fn gaussian_G(grid: &Grid2D) -> ScalarField {
    ScalarField::from_fn(*grid, gaussian)
}

#[allow(non_snake_case)]
pub fn oseen_velocity_vG(grid: &Grid2D) -> VectorField {
    sample_vector(grid, velocity_gaussian)
}

pub(crate) fn sample_vector(grid: &Grid2D, f: impl Fn(f64, f64) -> [f64; 2]) -> VectorField {
    let (v1, v2) = grid.points().map(|(x, y)| f(x, y)).map(|[a, b]| (a, b)).unzip();
    VectorField::new(*grid, v1, v2).expect("sizes match by construction")
}

/// The frozen eigenfunctions of `ℒ`.
#[derive(Debug, Clone)]
pub struct FrozenEigenfunctions {
    /// Eigenvalue 0.
    pub g: ScalarField,
    /// Eigenvalue −1/2.
    pub f1: ScalarField,
    pub f2: ScalarField,
    /// Eigenvalue −1.
    pub lap_g: ScalarField,
    pub diff_g: ScalarField,
    pub mixed_g: ScalarField,
}

impl FrozenEigenfunctions {
    /// `(field, eigenvalue of ℒ)` pairs in a fixed order.
    pub fn with_eigenvalues(&self) -> [(&ScalarField, f64); 6] {
        [
            (&self.g, 0.0),
            (&self.f1, -0.5),
            (&self.f2, -0.5),
            (&self.lap_g, -1.0),
            (&self.diff_g, -1.0),
            (&self.mixed_g, -1.0),
        ]
    }
}

/// `G, F₁, F₂, ΔG, (∂₁² − ∂₂²)G, ∂₁∂₂G` in closed form.
pub fn frozen_eigenfunctions(grid: &Grid2D) -> FrozenEigenfunctions {
    FrozenEigenfunctions {
        g: gaussian_G(grid),
        f1: ScalarField::from_fn(*grid, |x, y| dipole_modes(x, y)[0]),
        f2: ScalarField::from_fn(*grid, |x, y| dipole_modes(x, y)[1]),
        lap_g: ScalarField::from_fn(*grid, laplacian_gaussian),
        diff_g: ScalarField::from_fn(*grid, |x, y| {
            let h = hessian_gaussian(x, y);
            h[0] - h[1]
        }),
        mixed_g: ScalarField::from_fn(*grid, |x, y| hessian_gaussian(x, y)[2]),
    }
}

/// Oseen vortex `ω = (α/t) G(x/√t)`, `u = (α/√t) v^G(x/√t)` on a physical grid.
pub fn oseen_unscaled(grid: &Grid2D, t: f64, params: VortexParams) -> Result<(ScalarField, VectorField)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("Oseen vortex needs t > 0, got {t}")));
    }
    let s = t.sqrt();
    let a = params.alpha;
    let omega = ScalarField::from_fn(*grid, |x, y| a / t * gaussian(x / s, y / s)).with_frame(Frame::Unscaled, t)?;
    let u = sample_vector(grid, |x, y| {
        let [v1, v2] = velocity_gaussian(x / s, y / s);
        [a / s * v1, a / s * v2]
    });
    Ok((omega, u))
}
