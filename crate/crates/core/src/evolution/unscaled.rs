//! Physical-variable integrator with remapping to self-similar variables.

use num_complex::Complex64;

use super::solver::VelocityProvider;
use super::{Abort, Dealias, SolverConfig, TrajectoryRecord};
use crate::biot_savart::BiotSavart;
use crate::error::{Error, Result};
use crate::fields::{apply_dilation, Dilation, Frame, Grid2D, ScalarField, Spectral2D};

/// Relation between `τ` and physical time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    /// `t = e^τ`, so `τ = 0 ↔ t = 1`.
    Exp,
    /// `t = e^τ − 1`.
    ExpMinusOne,
}

impl Clock {
    pub fn t(self, tau: f64) -> f64 {
        match self {
            Clock::Exp => tau.exp(),
            Clock::ExpMinusOne => tau.exp_m1(),
        }
    }

    pub fn tau(self, t: f64) -> f64 {
        match self {
            Clock::Exp => t.ln(),
            Clock::ExpMinusOne => t.ln_1p(),
        }
    }
}

/// Physical-frame diagnostics at one recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSample {
    pub t: f64,
    pub mass: f64,
    /// `∫ xᵢ ω dx`.
    pub moment: [f64; 2],
    pub linf: f64,
    pub l1: f64,
    pub snapshot: Option<ScalarField>,
}

fn physical_sample(omega: &ScalarField, keep: bool) -> PhysicalSample {
    let h2 = omega.grid().cell_area();
    let (mut mass, mut m1, mut m2, mut l1) = (0.0, 0.0, 0.0, 0.0);
    for ((x, y), &v) in omega.grid().points().zip(omega.values()) {
        mass += v;
        m1 += x * v;
        m2 += y * v;
        l1 += v.abs();
    }
    PhysicalSample {
        t: omega.time(),
        mass: mass * h2,
        moment: [m1 * h2, m2 * h2],
        linf: omega.max_abs(),
        l1: l1 * h2,
        snapshot: keep.then(|| omega.clone()),
    }
}

struct Integrator {
    grid: Grid2D,
    fft: Spectral2D,
    bs: BiotSavart,
    k2: Vec<f64>,
    dealias: Dealias,
}

impl Integrator {
    /// Spectral `−u·∇ω`.
    fn nonlinear(&mut self, spec: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let omega = self.fft.inverse_real(spec.to_vec());
        let [d1, d2] = self.fft.gradient(spec);
        let field = ScalarField::from_parts(self.grid, omega, Frame::Unscaled, t);
        let u = VelocityProvider::velocity(&mut self.bs, &field)?;
        let prod: Vec<f64> = (0..d1.len()).map(|i| -(u.v1[i] * d1[i] + u.v2[i] * d2[i])).collect();
        let mut out = self.fft.forward(&prod);
        if self.dealias == Dealias::TwoThirds {
            self.fft.dealias(&mut out);
        }
        out[0] = Complex64::default();
        Ok(out)
    }

    /// Integrating-factor RK4 step of length `h` from time `t`.
    fn step(&mut self, spec: &[Complex64], t: f64, h: f64, e: &[f64]) -> Result<Vec<Complex64>> {
        self.bs.set_scale(t.sqrt());
        let n1 = self.nonlinear(spec, t)?;
        let a: Vec<Complex64> = (0..spec.len()).map(|i| e[i] * (spec[i] + 0.5 * h * n1[i])).collect();
        let n2 = self.nonlinear(&a, t + 0.5 * h)?;
        let b: Vec<Complex64> = (0..spec.len()).map(|i| e[i] * spec[i] + 0.5 * h * n2[i]).collect();
        let n3 = self.nonlinear(&b, t + 0.5 * h)?;
        let c: Vec<Complex64> = (0..spec.len()).map(|i| e[i] * e[i] * spec[i] + h * e[i] * n3[i]).collect();
        let n4 = self.nonlinear(&c, t + h)?;
        Ok((0..spec.len())
            .map(|i| {
                let e2 = e[i] * e[i];
                e2 * spec[i] + h / 6.0 * (e2 * n1[i] + 2.0 * e[i] * (n2[i] + n3[i]) + n4[i])
            })
            .collect())
    }
}

/// Integrates the physical vorticity equation from `omega0` (at time `omega0.time()`) to `t_end`
/// and records self-similar diagnostics on `scaled_grid` via `w(ξ,τ) = e^τ ω(ξe^{τ/2}, t(τ))`.
///
/// Recording instants are spaced by `cfg.dt · cfg.record_every` in `τ`; each interval is split
/// into substeps of at most `cfg.dt · t` in physical time.
pub fn simulate_unscaled(
    omega0: &ScalarField,
    t_end: f64,
    cfg: &SolverConfig,
    scaled_grid: &Grid2D,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    omega0.require_frame(Frame::Unscaled)?;
    omega0.ensure_finite()?;
    let t0 = omega0.time();
    if !(t0 > 0.0) || !(t_end > t0) {
        return Err(Error::InvalidArgument(format!("need 0 < t0 < t_end, got {t0}, {t_end}")));
    }
    let clock = cfg.clock;
    let grid = *omega0.grid();
    let fft = Spectral2D::new(&grid);
    let k = fft.wavenumbers().to_vec();
    let n = grid.n();
    let k2: Vec<f64> = (0..n * n).map(|idx| k[idx / n] * k[idx / n] + k[idx % n] * k[idx % n]).collect();
    let mut integ = Integrator {
        grid,
        fft: fft.clone(),
        bs: BiotSavart::with_scale(&grid, t0.sqrt()),
        k2,
        dealias: cfg.dealias,
    };
    let scaled_fft = Spectral2D::new(scaled_grid);
    let mut record = TrajectoryRecord::new(&cfg.norm_weights);

    let tau0 = clock.tau(t0);
    let tau_end = clock.tau(t_end);
    let dtau = cfg.dt * cfg.record_every as f64;
    let intervals = ((tau_end - tau0) / dtau - 1e-9).ceil().max(1.0) as usize;
    let mut spec = fft.forward(omega0.values());
    let mut t = t0;
    let mut step = 0usize;

    let push = |record: &mut TrajectoryRecord, spec: &[Complex64], t: f64| -> Result<()> {
        let omega = ScalarField::from_parts(grid, fft.inverse_real(spec.to_vec()), Frame::Unscaled, t);
        let tau = clock.tau(t);
        let dil = Dilation::new(&grid, scaled_grid, (tau / 2.0).exp());
        let w = apply_dilation(&omega, &dil).scaled(tau.exp()).with_frame(Frame::Scaled, tau)?;
        record.push(&w, &scaled_fft, cfg.snapshots)?;
        record.physical.push(physical_sample(&omega, cfg.snapshots));
        Ok(())
    };
    push(&mut record, &spec, t)?;

    'outer: for j in 1..=intervals {
        let tau_next = (tau0 + j as f64 * dtau).min(tau_end);
        let t_next = clock.t(tau_next);
        let sub = ((t_next - t) / (cfg.dt * t)).ceil().max(1.0) as usize;
        let h = (t_next - t) / sub as f64;
        let e: Vec<f64> = integ.k2.iter().map(|&q| (-0.5 * h * q).exp()).collect();
        for s in 0..sub {
            match integ.step(&spec, t, h, &e) {
                Ok(next) if next.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => spec = next,
                Ok(_) => {
                    record.abort =
                        Some(Abort { step, tau: clock.tau(t), reason: Error::Blowup { step }.to_string() });
                    break 'outer;
                }
                Err(err) => {
                    record.abort = Some(Abort { step, tau: clock.tau(t), reason: err.to_string() });
                    break 'outer;
                }
            }
            step += 1;
            t = if s + 1 == sub { t_next } else { t + h };
        }
        push(&mut record, &spec, t)?;
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clocks_invert() {
        for tau in [0.0, 0.3, 2.0] {
            assert!((Clock::Exp.tau(Clock::Exp.t(tau)) - tau).abs() < 1e-15);
            assert!((Clock::ExpMinusOne.tau(Clock::ExpMinusOne.t(tau)) - tau).abs() < 1e-15);
        }
        assert_eq!(Clock::Exp.t(0.0), 1.0);
    }
}
