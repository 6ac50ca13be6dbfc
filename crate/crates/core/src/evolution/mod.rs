//! Time integration of the rescaled and physical vorticity equations.

mod diagnostics;
mod semigroup;
mod solver;
mod unscaled;

pub use diagnostics::{carlen_loss_ratio, gradient_norm, lp_time_constant};
pub use semigroup::{generator, lambda, semigroup_S, Semigroup};
pub use solver::{linearized_step, simulate, step_sv, LinearizedSolver, ScaledSolver, VelocityProvider};
pub use unscaled::{simulate_unscaled, Clock, PhysicalSample};

use std::io::Write;

use crate::error::{Error, Result};
use crate::fields::{moments, weighted_norm, MomentSet, ScalarField, Spectral2D, Warning};
use crate::lyapunov;
use crate::vortex;

/// Dealiasing of the nonlinear product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dealias {
    TwoThirds,
    None,
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `S(dt/2) ∘ advection(dt) ∘ S(dt/2)` in self-similar variables.
    StrangSplit,
    /// Integrating-factor RK4 on the physical box, remapped to `(ξ, τ)`.
    UnscaledRemap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Step in `τ` units.
    pub dt: f64,
    pub dealias: Dealias,
    pub scheme: Scheme,
    /// Diagnostics are recorded every this many steps.
    pub record_every: usize,
    pub end_tau: f64,
    /// Exponents `m` of the residual norms `‖w − αG‖_m`.
    pub norm_weights: Vec<f64>,
    /// Courant number above which a warning is recorded.
    pub cfl_limit: f64,
    /// Keep a field snapshot at every recorded sample.
    pub snapshots: bool,
    /// Time variable of unscaled runs.
    pub clock: Clock,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            dealias: Dealias::TwoThirds,
            scheme: Scheme::StrangSplit,
            record_every: 10,
            end_tau: 5.0,
            norm_weights: vec![0.0, 2.0],
            cfl_limit: 1.0,
            snapshots: false,
            clock: Clock::Exp,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.end_tau > 0.0 && self.end_tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("end_tau = {} must be positive", self.end_tau)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be at least 1".into()));
        }
        if self.norm_weights.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::InvalidArgument("norm weights must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.end_tau / self.dt).round().max(1.0) as usize
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub step: usize,
    pub tau: f64,
    pub reason: String,
}

/// Diagnostics sampled along a run.
#[derive(Debug, Clone, Default)]
pub struct TrajectoryRecord {
    pub taus: Vec<f64>,
    pub moments: Vec<MomentSet>,
    pub norm_weights: Vec<f64>,
    /// `residuals[k][j] = ‖w(τₖ) − α(τₖ)G‖_{mⱼ}`.
    pub residuals: Vec<Vec<f64>>,
    /// `|w − αG|₁`.
    pub l1_residual: Vec<f64>,
    pub phi: Vec<f64>,
    /// `H`, present when the sample is admissible.
    pub entropy: Vec<Option<f64>>,
    pub fisher: Vec<Option<f64>>,
    pub min_w: Vec<f64>,
    pub max_w: Vec<f64>,
    pub snapshots: Vec<ScalarField>,
    /// Physical-frame samples of unscaled runs.
    pub physical: Vec<PhysicalSample>,
    pub warnings: Vec<Warning>,
    pub abort: Option<Abort>,
}

/// Scalar series extracted from a record.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    /// `‖w − αG‖_m` for a configured `m`.
    Residual(f64),
    L1Residual,
    /// `H − α log α`.
    EntropyGap,
    Fisher,
    /// `|β|`.
    FirstMoment,
    Values(Vec<f64>),
}

impl TrajectoryRecord {
    pub fn new(norm_weights: &[f64]) -> Self {
        Self { norm_weights: norm_weights.to_vec(), ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Appends the diagnostics of `w` at its time stamp.
    pub fn push(&mut self, w: &ScalarField, fft: &Spectral2D, keep_snapshot: bool) -> Result<()> {
        let tau = w.time();
        if let Some(&last) = self.taus.last() {
            if tau <= last {
                return Err(Error::InvalidArgument(format!("sample time {tau} not after {last}")));
            }
        }
        let m = moments(w);
        let residual = w.add_scaled(-m.alpha, &vortex::gaussian_G(w.grid()))?;
        let norms =
            self.norm_weights.iter().map(|&mw| weighted_norm(&residual, mw)).collect::<Result<Vec<_>>>()?;
        let l1 = residual.integrate(|_, _, v| v.abs());
        let (min, max) = (w.min_value(), w.max_value());
        let admissible = m.alpha > 0.0 && max > 0.0 && min >= -lyapunov::UNDERSHOOT * max;
        let (h, i) = if admissible {
            (lyapunov::relative_entropy(w).ok(), Some(lyapunov::fisher_unchecked(w, fft, max)))
        } else {
            (None, None)
        };
        self.taus.push(tau);
        self.moments.push(m);
        self.residuals.push(norms);
        self.l1_residual.push(l1);
        self.phi.push(lyapunov::phi(w).phi);
        self.entropy.push(h);
        self.fisher.push(if h.is_some() { i } else { None });
        self.min_w.push(min);
        self.max_w.push(max);
        if keep_snapshot {
            self.snapshots.push(w.clone());
        }
        for warning in &w.warnings {
            if !self.warnings.contains(warning) {
                self.warnings.push(warning.clone());
            }
        }
        Ok(())
    }

    pub fn series(&self, q: &Quantity) -> Result<Vec<f64>> {
        match q {
            Quantity::Residual(m) => {
                let j = self
                    .norm_weights
                    .iter()
                    .position(|x| x == m)
                    .ok_or_else(|| Error::InvalidArgument(format!("no residual recorded for m = {m}")))?;
                Ok(self.residuals.iter().map(|r| r[j]).collect())
            }
            Quantity::L1Residual => Ok(self.l1_residual.clone()),
            Quantity::EntropyGap => self
                .entropy
                .iter()
                .zip(&self.moments)
                .map(|(h, m)| {
                    h.map(|h| h - m.alpha * m.alpha.ln())
                        .ok_or_else(|| Error::InvalidEntropy("sample without entropy".into()))
                })
                .collect(),
            Quantity::Fisher => self
                .fisher
                .iter()
                .map(|i| i.ok_or_else(|| Error::InvalidEntropy("sample without Fisher information".into())))
                .collect(),
            Quantity::FirstMoment => Ok(self.moments.iter().map(|m| m.beta1.hypot(m.beta2)).collect()),
            Quantity::Values(v) => {
                if v.len() != self.taus.len() {
                    return Err(Error::InvalidArgument("series length differs from the record".into()));
                }
                Ok(v.clone())
            }
        }
    }

    /// Writes `tau, alpha, beta1, beta2, mu2, phi, H, I, min_w, resid_m*` rows.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header: Vec<String> =
            ["tau", "alpha", "beta1", "beta2", "mu2", "phi", "H", "I", "min_w"].iter().map(|s| s.to_string()).collect();
        header.extend(self.norm_weights.iter().map(|m| format!("resid_m{m}")));
        wtr.write_record(&header).map_err(csv_error)?;
        let opt = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
        for k in 0..self.taus.len() {
            let m = self.moments[k];
            let mut row = vec![
                fmt_float(self.taus[k]),
                fmt_float(m.alpha),
                fmt_float(m.beta1),
                fmt_float(m.beta2),
                fmt_float(m.mu2),
                fmt_float(self.phi[k]),
                opt(self.entropy[k]),
                opt(self.fisher[k]),
                fmt_float(self.min_w[k]),
            ];
            row.extend(self.residuals[k].iter().copied().map(fmt_float));
            wtr.write_record(&row).map_err(csv_error)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Shortest round-trip representation, so reruns produce identical bytes.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

/// Least-squares fit of `log q = c − μτ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub mu: f64,
    /// Coefficient of determination of the log-linear fit.
    pub r_squared: f64,
    pub samples: usize,
}

/// Fits the exponential decay rate of `values` over `taus ∈ [window.0, window.1]`.
pub fn fit_exponential(taus: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in taus.iter().zip(values) {
        if t < window.0 - 1e-12 || t > window.1 + 1e-12 {
            continue;
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositive { tau: t, value: v });
        }
        xs.push(t);
        ys.push(v.ln());
    }
    if xs.len() < 4 {
        return Err(Error::TooFewSamples { needed: 4, got: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(DecayFit { mu: -slope, r_squared, samples: xs.len() })
}

pub fn fit_decay_rate(record: &TrajectoryRecord, quantity: &Quantity, window: (f64, f64)) -> Result<DecayFit> {
    fit_exponential(&record.taus, &record.series(quantity)?, window)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_exponential_fit() {
        let taus: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let vals: Vec<f64> = taus.iter().map(|t| 3.0 * (-0.5 * t).exp()).collect();
        let fit = fit_exponential(&taus, &vals, (1.0, 4.0)).unwrap();
        assert!((fit.mu - 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.samples, 31);
        assert!(matches!(fit_exponential(&taus, &vals, (1.0, 1.25)), Err(Error::TooFewSamples { .. })));
        let mut bad = vals.clone();
        bad[20] = 0.0;
        assert!(matches!(fit_exponential(&taus, &bad, (1.0, 4.0)), Err(Error::NonPositive { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig { dt: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert_eq!(SolverConfig::default().steps(), 500);
    }
}
