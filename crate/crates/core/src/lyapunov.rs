//! Lyapunov functionals `Φ`, `H`, `I` and the entropy-method inequalities.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::evolution::TrajectoryRecord;
use crate::fields::{moments, Frame, ScalarField, Spectral2D};
use crate::vortex;

/// Values in `[−UNDERSHOOT·max w, 0)` count as zero in log integrands.
pub const UNDERSHOOT: f64 = 1e-6;

/// The Fisher integrand is dropped where `w < LOW_DENSITY·max w`.
pub const LOW_DENSITY: f64 = 1e-14;

/// `Φ(w) = ∫|w|` together with `|∫w|`; `w` is sign-definite iff the two agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiReport {
    pub phi: f64,
    pub abs_alpha: f64,
}

impl PhiReport {
    pub fn sign_definite(&self, tol: f64) -> bool {
        self.phi - self.abs_alpha <= tol * self.phi.max(f64::MIN_POSITIVE)
    }
}

pub fn phi(w: &ScalarField) -> PhiReport {
    let phi = w.integrate(|_, _, v| v.abs());
    PhiReport { phi, abs_alpha: moments(w).alpha.abs() }
}

fn log_gaussian(x: f64, y: f64) -> f64 {
    -(x * x + y * y) / 4.0 - (4.0 * PI).ln()
}

/// Rejects fields that are materially negative or have nonpositive mass.
fn check_admissible(w: &ScalarField) -> Result<f64> {
    w.require_frame(Frame::Scaled)?;
    w.ensure_finite()?;
    let max = w.max_value();
    let min = w.min_value();
    if !(max > 0.0) || min < -UNDERSHOOT * max {
        return Err(Error::InvalidEntropy(format!("field not nonnegative (min {min:e}, max {max:e})")));
    }
    let alpha = moments(w).alpha;
    if !(alpha > 0.0) {
        return Err(Error::InvalidEntropy(format!("total vorticity {alpha:e} not positive")));
    }
    Ok(max)
}

/// `H(w) = ∫ w log(w/G)` with `0·log 0 = 0`.
pub fn relative_entropy(w: &ScalarField) -> Result<f64> {
    check_admissible(w)?;
    Ok(w.integrate(|x, y, v| if v > 0.0 { v * (v.ln() - log_gaussian(x, y)) } else { 0.0 }))
}

/// `I(w) = ∫ |∇w + ξw/2|² / w` with spectral gradients.
pub fn fisher_information(w: &ScalarField) -> Result<f64> {
    let max = check_admissible(w)?;
    Ok(fisher_unchecked(w, &Spectral2D::new(w.grid()), max))
}

pub(crate) fn fisher_unchecked(w: &ScalarField, fft: &Spectral2D, max: f64) -> f64 {
    let [d1, d2] = fft.gradient(&fft.forward(w.values()));
    let floor = LOW_DENSITY * max;
    let sum: f64 = w
        .grid()
        .points()
        .zip(w.values())
        .enumerate()
        .map(|(i, ((x, y), &v))| {
            if v < floor {
                return 0.0;
            }
            let a = d1[i] + 0.5 * x * v;
            let b = d2[i] + 0.5 * y * v;
            (a * a + b * b) / v
        })
        .sum();
    sum * w.grid().cell_area()
}

/// `H`, `I` and `Φ` of a field together with the entropy inequality gaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub h: f64,
    pub i: f64,
    pub phi: f64,
    pub alpha: f64,
    /// `(1/2α)|w − αG|₁²`.
    pub ck_lhs: f64,
    /// `H − α log α − ck_lhs`, nonnegative by Csiszár–Kullback.
    pub ck_gap: f64,
    /// `I − (H − α log α)`, nonnegative by the logarithmic Sobolev inequality.
    pub logsob_gap: f64,
    pub valid: bool,
}

impl EntropyReport {
    fn invalid(phi: f64, alpha: f64) -> Self {
        Self {
            h: f64::NAN,
            i: f64::NAN,
            phi,
            alpha,
            ck_lhs: f64::NAN,
            ck_gap: f64::NAN,
            logsob_gap: f64::NAN,
            valid: false,
        }
    }

    /// `H − α log α`.
    pub fn entropy_gap(&self) -> f64 {
        self.h - self.alpha * self.alpha.ln()
    }

    /// Both inequalities hold with slack `tol` (absolute).
    pub fn inequalities_hold(&self, tol: f64) -> bool {
        self.valid && self.ck_gap >= -tol && self.logsob_gap >= -tol
    }
}

/// `|w − αG|₁`.
pub fn l1_distance_to_vortex(w: &ScalarField, alpha: f64) -> f64 {
    w.integrate(|x, y, v| (v - alpha * vortex::gaussian(x, y)).abs())
}

/// Evaluates `(1/2α)|w − αG|₁² ≤ H − α log α ≤ I`.
///
/// Fields outside the admissible class give `valid = false` instead of an error.
pub fn inequality_suite(w: &ScalarField) -> EntropyReport {
    let p = phi(w);
    let alpha = moments(w).alpha;
    let (h, i) = match (relative_entropy(w), fisher_information(w)) {
        (Ok(h), Ok(i)) => (h, i),
        _ => return EntropyReport::invalid(p.phi, alpha),
    };
    let l1 = l1_distance_to_vortex(w, alpha);
    let ck_lhs = l1 * l1 / (2.0 * alpha);
    let gap = h - alpha * alpha.ln();
    EntropyReport { h, i, phi: p.phi, alpha, ck_lhs, ck_gap: gap - ck_lhs, logsob_gap: i - gap, valid: true }
}

/// Explicit bound `|w(τ) − αG|₁ ≤ √(2α) (H(w₀) − α log α)^{1/2} e^{−τ/2}`.
pub fn explicit_bound(alpha: f64, h0: f64, tau: f64) -> f64 {
    (2.0 * alpha).sqrt() * (h0 - alpha * alpha.ln()).max(0.0).sqrt() * (-tau / 2.0).exp()
}

/// Per-sample check of the explicit bound along a trajectory; returns the smallest slack
/// `bound − |w − αG|₁` over the samples.
pub fn explicit_bound_slack(record: &TrajectoryRecord) -> Result<f64> {
    let h0 = record.entropy.first().copied().flatten().ok_or_else(|| {
        Error::InvalidEntropy("trajectory carries no initial entropy".into())
    })?;
    let alpha = record.moments[0].alpha;
    let tau0 = record.taus[0];
    Ok(record
        .taus
        .iter()
        .zip(&record.l1_residual)
        .map(|(&t, &d)| explicit_bound(alpha, h0, t - tau0) - d)
        .fold(f64::INFINITY, f64::min))
}

/// Compares centred differences of `H` with `−I` at interior samples.
///
/// Returns `max |dH/dτ + I| / max(max I, floor)`.
pub fn entropy_dissipation_check(record: &TrajectoryRecord, floor: f64) -> Result<f64> {
    let n = record.taus.len();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    let series = |v: &[Option<f64>]| -> Result<Vec<f64>> {
        v.iter()
            .map(|x| x.ok_or_else(|| Error::InvalidEntropy("entropy missing on a sample".into())))
            .collect()
    };
    let h = series(&record.entropy)?;
    let i = series(&record.fisher)?;
    let t = &record.taus;
    let scale = i.iter().copied().fold(floor, f64::max);
    let mut worst: f64 = 0.0;
    for k in 1..n - 1 {
        // second-order difference on a possibly non-uniform stencil
        let (hm, hp) = (t[k] - t[k - 1], t[k + 1] - t[k]);
        let dh = (h[k + 1] - h[k]) * hm / (hp * (hm + hp)) + (h[k] - h[k - 1]) * hp / (hm * (hm + hp));
        worst = worst.max((dh + i[k]).abs());
    }
    Ok(worst / scale)
}

/// Largest increase `H(τₖ₊₁) − H(τₖ)` along the record (nonpositive when `H` is monotone).
pub fn max_entropy_increase(record: &TrajectoryRecord) -> Option<f64> {
    let h: Option<Vec<f64>> = record.entropy.iter().copied().collect();
    let h = h?;
    Some(h.windows(2).map(|p| p[1] - p[0]).fold(f64::NEG_INFINITY, f64::max))
}
