//! Optional smoothing and pointwise-bound diagnostics.

use super::semigroup::Semigroup;
use super::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::fields::{lp_norm, LpExponent, ScalarField, Spectral2D};

/// `‖∇w‖₀` with spectral derivatives.
pub fn gradient_norm(w: &ScalarField) -> f64 {
    let fft = Spectral2D::new(w.grid());
    let [d1, d2] = fft.gradient(&fft.forward(w.values()));
    let s: f64 = d1.iter().zip(&d2).map(|(a, b)| a * a + b * b).sum();
    (s * w.grid().cell_area()).sqrt()
}

/// `max |w(ξ,τ)| / K_β(τ)|w₀|(ξ)` over points where the majorant exceeds `1e-8` of its maximum.
///
/// `K_β(τ)` is the semigroup with its heat kernel widened by `1/β`.
pub fn carlen_loss_ratio(w: &ScalarField, w0: &ScalarField, tau: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) || !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("need 0 < beta <= 1 and tau > 0, got {beta}, {tau}")));
    }
    if w.grid() != w0.grid() {
        return Err(Error::GridMismatch("snapshots live on different grids".into()));
    }
    let abs0 = ScalarField::from_parts(*w0.grid(), w0.values().iter().map(|v| v.abs()).collect(), w0.frame(), 0.0);
    let majorant = Semigroup::with_diffusivity(w0.grid(), tau, 1.0 / beta).apply(&abs0);
    let cut = 1e-8 * majorant.max_abs();
    Ok(w.values()
        .iter()
        .zip(majorant.values())
        .filter(|(_, &m)| m > cut)
        .map(|(v, m)| v.abs() / m)
        .fold(0.0, f64::max))
}

/// Empirical `sup_t t^{1−1/p} |ω(·,t)|_p` over the physical samples of an unscaled run.
pub fn lp_time_constant(record: &TrajectoryRecord, p: LpExponent) -> Result<f64> {
    if record.physical.is_empty() {
        return Err(Error::InvalidArgument("record has no physical samples".into()));
    }
    let mut sup: f64 = 0.0;
    for s in &record.physical {
        let (norm, weight) = match p {
            LpExponent::Infinity => (s.linf, s.t),
            LpExponent::Finite(1.0) => (s.l1, 1.0),
            LpExponent::Finite(q) => {
                let snap = s.snapshot.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("general p needs physical snapshots".into())
                })?;
                (lp_norm(snap, p)?, s.t.powf(1.0 - 1.0 / q))
            }
        };
        sup = sup.max(norm * weight);
    }
    Ok(sup)
}
