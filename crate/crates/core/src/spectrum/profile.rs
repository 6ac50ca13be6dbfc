//! Azimuthal Fourier modes of vorticity fields and their stream functions.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::quadrature::RadialGrid;
use crate::biot_savart::TRUNCATION_TOLERANCE;
use crate::error::{Error, Result};
use crate::fields::{Frame, ScalarField, Warning};

/// Values `ω_n(r_k)` of one azimuthal mode on a radial grid.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub n: i32,
    pub values: Vec<Complex64>,
    grid: Arc<RadialGrid>,
    pub warnings: Vec<Warning>,
}

impl RadialProfile {
    pub fn new(n: i32, values: Vec<Complex64>, grid: Arc<RadialGrid>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} radial nodes", values.len(), grid.len())));
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n, values, grid, warnings: Vec::new() })
    }

    pub fn from_fn(n: i32, grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| Complex64::new(f(r), 0.0)).collect();
        Self::new(n, values, grid)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `g(r) = e^{−r²/4}/4π`.
pub fn radial_gaussian(r: f64) -> f64 {
    (-r * r / 4.0).exp() / (4.0 * PI)
}

/// Angular velocity of the Oseen vortex, `φ(r) = (1 − e^{−r²/4})/(2πr²)`.
pub fn angular_velocity(r: f64) -> f64 {
    let s = r * r / 4.0;
    if s < 1e-8 {
        (1.0 - s / 2.0) / (8.0 * PI)
    } else {
        -(-s).exp_m1() / (8.0 * PI * s)
    }
}

/// `Ω(r) = (1/4|n|)(∫₀^r (z/r)^{|n|} zω dz + ∫_r^∞ (r/z)^{|n|} zω dz)` on the profile nodes.
pub fn stream_omega(profile: &RadialProfile) -> Result<RadialProfile> {
    if profile.n == 0 {
        return Err(Error::InvalidArgument("stream function of mode 0 is not used (Λ₀ = 0)".into()));
    }
    let grid = profile.grid.clone();
    let m = profile.n.unsigned_abs() as i32;
    let part = |take: fn(&Complex64) -> f64| -> Vec<f64> {
        let inner: Vec<f64> =
            grid.nodes().iter().zip(&profile.values).map(|(z, w)| z.powi(m + 1) * take(w)).collect();
        let outer: Vec<f64> =
            grid.nodes().iter().zip(&profile.values).map(|(z, w)| z.powi(1 - m) * take(w)).collect();
        let head = grid.cumulative_from_origin(&inner);
        let tail = grid.cumulative_to_end(&outer);
        grid.nodes()
            .iter()
            .enumerate()
            .map(|(k, r)| (head[k] / r.powi(m) + r.powi(m) * tail[k]) / (4.0 * m as f64))
            .collect()
    };
    let re = part(|c| c.re);
    let im = part(|c| c.im);
    let values = re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect();
    let mut out = RadialProfile::new(profile.n, values, grid)?;
    out.warnings = profile.warnings.clone();
    Ok(out)
}

/// `Λ_n ω = in(φω − gΩ)` evaluated pointwise.
pub fn apply_lambda(profile: &RadialProfile) -> Result<RadialProfile> {
    let grid = profile.grid.clone();
    if profile.n == 0 {
        return RadialProfile::new(0, vec![Complex64::default(); grid.len()], grid);
    }
    let omega = stream_omega(profile)?;
    let i_n = Complex64::new(0.0, profile.n as f64);
    let values = grid
        .nodes()
        .iter()
        .zip(&profile.values)
        .zip(&omega.values)
        .map(|((&r, &w), &o)| i_n * (angular_velocity(r) * w - radial_gaussian(r) * o))
        .collect();
    RadialProfile::new(profile.n, values, grid)
}

const STENCIL: usize = 12;
const ANGLES: usize = 128;

/// Equispaced Lagrange weights for a stencil starting at integer offset 0 and point `t` (in cells).
fn lagrange_weights(t: f64) -> [f64; STENCIL] {
    let mut w = [1.0; STENCIL];
    for (i, wi) in w.iter_mut().enumerate() {
        for j in 0..STENCIL {
            if j != i {
                *wi *= (t - j as f64) / (i as f64 - j as f64);
            }
        }
    }
    w
}

/// `ω_n(r_k) = (1/2π)∫ w(r cos θ, r sin θ) e^{−inθ} dθ` by the trapezoid rule on local
/// high-order interpolants of `w`.
///
/// Nodes whose stencil leaves the box are set to zero; a truncation warning is attached when the
/// field is not negligible at the box edge.
pub fn mode_decompose(w: &ScalarField, n: i32, grid: Arc<RadialGrid>) -> Result<RadialProfile> {
    w.require_frame(Frame::Scaled)?;
    w.ensure_finite()?;
    let g = *w.grid();
    let (nn, h, half) = (g.n(), g.spacing(), g.half_width());
    let reach = half - (STENCIL as f64 / 2.0 + 1.0) * h;
    let angles: Vec<(f64, f64, Complex64)> = (0..ANGLES)
        .map(|l| {
            let th = 2.0 * PI * l as f64 / ANGLES as f64;
            (th.cos(), th.sin(), Complex64::from_polar(1.0 / ANGLES as f64, -(n as f64) * th))
        })
        .collect();
    let sample = |x: f64, y: f64| -> f64 {
        let fx = (x + half) / h;
        let fy = (y + half) / h;
        let ix = fx.floor() as isize - (STENCIL as isize / 2 - 1);
        let iy = fy.floor() as isize - (STENCIL as isize / 2 - 1);
        let wx = lagrange_weights(fx - ix as f64);
        let wy = lagrange_weights(fy - iy as f64);
        let mut acc = 0.0;
        for (a, wa) in wx.iter().enumerate() {
            let row = (ix + a as isize) as usize * nn;
            let mut inner = 0.0;
            for (b, wb) in wy.iter().enumerate() {
                inner += wb * w.values()[row + (iy + b as isize) as usize];
            }
            acc += wa * inner;
        }
        acc
    };
    let mut truncated = false;
    let values = grid
        .nodes()
        .iter()
        .map(|&r| {
            if r > reach {
                truncated = true;
                return Complex64::default();
            }
            angles.iter().map(|&(c, s, e)| e * sample(r * c, r * s)).sum()
        })
        .collect();
    let mut out = RadialProfile::new(n, values, grid)?;
    let ratio = w.boundary_ratio();
    if truncated && ratio > TRUNCATION_TOLERANCE {
        out.warnings.push(Warning::Truncation { boundary_ratio: ratio });
    }
    Ok(out)
}
