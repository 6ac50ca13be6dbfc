//! Decay of the remainder after the two-term expansion `αG + (β₁F₁ + β₂F₂)e^{−τ/2}`.

use oseen_core::evolution::{fit_exponential, DecayFit, TrajectoryRecord};
use oseen_core::vortex::{dipole_modes, gaussian};

use crate::error::{CliError, CliResult};

/// Residuals below this fraction of the initial norm are treated as round-off.
pub const NOISE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SecondOrderFit {
    pub norm_weights: Vec<f64>,
    pub taus: Vec<f64>,
    /// `residuals[k][j]` at `taus[k]` in the norm `m = norm_weights[j]`.
    pub residuals: Vec<Vec<f64>>,
    /// `None` for degenerate weights.
    pub fits: Vec<Option<DecayFit>>,
    /// The remainder stayed at the noise floor over the window.
    pub degenerate: Vec<bool>,
}

/// `‖w(τ) − αG − (β₁F₁ + β₂F₂)e^{−τ/2}‖_m` on every snapshot of `record`, with `α, β` taken
/// from the first sample, and its fitted decay rate over `window`.
pub fn second_order_asymptotics(record: &TrajectoryRecord, window: (f64, f64)) -> CliResult<SecondOrderFit> {
    if record.snapshots.is_empty() || record.snapshots.len() != record.taus.len() {
        return Err(CliError::Rejected(format!(
            "second-order asymptotics needs a snapshot at every sample ({} snapshots, {} samples)",
            record.snapshots.len(),
            record.taus.len()
        )));
    }
    let m0 = record.moments[0];
    if m0.alpha == 0.0 {
        return Err(CliError::Rejected("second-order asymptotics needs a trajectory with alpha != 0".into()));
    }
    let tau0 = record.taus[0];
    let residuals: Vec<Vec<f64>> = record
        .snapshots
        .iter()
        .zip(&record.taus)
        .map(|(w, &t)| {
            let e = (-(t - tau0) / 2.0).exp();
            record
                .norm_weights
                .iter()
                .map(|&m| {
                    w.integrate(|x, y, v| {
                        let [f1, f2] = dipole_modes(x, y);
                        let r = v - m0.alpha * gaussian(x, y) - e * (m0.beta1 * f1 + m0.beta2 * f2);
                        (1.0 + x * x + y * y).powf(m) * r * r
                    })
                    .sqrt()
                })
                .collect()
        })
        .collect();
    let mut fits = Vec::new();
    let mut degenerate = Vec::new();
    for (j, &m) in record.norm_weights.iter().enumerate() {
        let scale = record.snapshots[0].integrate(|x, y, v| (1.0 + x * x + y * y).powf(m) * v * v).sqrt();
        let series: Vec<f64> = residuals.iter().map(|r| r[j]).collect();
        let peak = record
            .taus
            .iter()
            .zip(&series)
            .filter(|(t, _)| **t >= window.0 - 1e-12 && **t <= window.1 + 1e-12)
            .map(|(_, v)| *v)
            .fold(0.0, f64::max);
        if peak <= NOISE_FLOOR * scale {
            degenerate.push(true);
            fits.push(None);
        } else {
            degenerate.push(false);
            fits.push(Some(fit_exponential(&record.taus, &series, window)?));
        }
    }
    Ok(SecondOrderFit { norm_weights: record.norm_weights.clone(), taus: record.taus.clone(), residuals, fits, degenerate })
}
