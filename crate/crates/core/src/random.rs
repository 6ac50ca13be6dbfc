//! Seeded random smooth fields.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fields::{moments, project_subspace, Grid2D, ScalarField, Spectral2D, SubspaceLevel};
use crate::vortex;

/// Gaussian random field with spectrum `e^{−|k|²ℓ²/4}` scaled to unit maximum.
pub fn filtered_noise(grid: &Grid2D, seed: u64, corr_len: f64) -> Result<ScalarField> {
    if !(corr_len > 0.0) {
        return Err(Error::InvalidArgument(format!("correlation length {corr_len} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..grid.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let fft = Spectral2D::new(grid);
    let mut spec = fft.forward(&noise);
    fft.apply_multiplier(&mut spec, |k1, k2| {
        Complex64::new((-(k1 * k1 + k2 * k2) * corr_len * corr_len / 4.0).exp(), 0.0)
    });
    let values = fft.inverse_real(spec);
    let max = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(ScalarField::from_fn(*grid, |_, _| 0.0).with_values(values.into_iter().map(|v| v / max).collect()))
}

/// Smooth field `amplitude · φ · G / max|φ G|` projected to zero mass.
pub fn random_smooth(grid: &Grid2D, seed: u64, corr_len: f64, amplitude: f64) -> Result<ScalarField> {
    let phi = filtered_noise(grid, seed, corr_len)?;
    let enveloped = ScalarField::from_fn(*grid, |_, _| 0.0).with_values(
        grid.points().zip(phi.values()).map(|((x, y), p)| p * vortex::gaussian(x, y)).collect(),
    );
    let zero_mean = project_subspace(&enveloped, SubspaceLevel::ZeroMean)?;
    let scale = zero_mean.max_abs();
    Ok(zero_mean.scaled(amplitude / scale))
}

/// Positive datum `α G (1 + ε φ) / mass` with `max|φ| = 1`, so `w ≥ (1 − ε) α G / mass`.
pub fn positive_perturbation(grid: &Grid2D, seed: u64, corr_len: f64, eps: f64, alpha: f64) -> Result<ScalarField> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("perturbation size {eps} must lie in [0, 1)")));
    }
    let phi = filtered_noise(grid, seed, corr_len)?;
    let w = ScalarField::from_fn(*grid, |_, _| 0.0).with_values(
        grid.points().zip(phi.values()).map(|((x, y), p)| vortex::gaussian(x, y) * (1.0 + eps * p)).collect(),
    );
    let mass = moments(&w).alpha;
    Ok(w.scaled(alpha / mass))
}
