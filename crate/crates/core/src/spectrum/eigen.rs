//! Eigenvalues with two-grid trust, bound verification and linear decay.

use std::io::Write;
use std::sync::Arc;

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::expm::expm;
use super::operator::{ModeForms, OperatorMatrix};
use super::profile::RadialProfile;
use super::quadrature::RadialGrid;
use crate::error::{Error, Result};
use crate::evolution::{csv_error, fit_exponential};

/// Eigenvalues of the two resolutions closer than this are trusted.
pub const TRUST_TOLERANCE: f64 = 1e-6;

/// Default coarse and fine basis sizes.
pub const DEFAULT_RESOLUTIONS: [usize; 2] = [80, 120];

/// Invariant subspaces of `ℒ − αΛ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace {
    Full,
    /// `∫w = 0`.
    ZeroMean,
    /// Zero mean and `∫ξw = 0`.
    MomentFree,
    /// Moment-free and `∫|ξ|²w = 0`.
    SecondMomentFree,
}

impl Subspace {
    pub const ALL: [Subspace; 4] = [Subspace::Full, Subspace::ZeroMean, Subspace::MomentFree, Subspace::SecondMomentFree];

    pub fn name(self) -> &'static str {
        match self {
            Subspace::Full => "full",
            Subspace::ZeroMean => "zero-mean",
            Subspace::MomentFree => "moment-free",
            Subspace::SecondMomentFree => "second-moment-free",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    /// Number of leading basis functions removed in mode `n`: `G` and `ΔG` for `n = 0`, `F_j` for `|n| = 1`.
    pub fn deflated(self, n: i32) -> usize {
        match (self, n.unsigned_abs()) {
            (Subspace::Full, _) => 0,
            (Subspace::ZeroMean, 0) => 1,
            (Subspace::ZeroMean, _) => 0,
            (Subspace::MomentFree, 0 | 1) => 1,
            (Subspace::MomentFree, _) => 0,
            (Subspace::SecondMomentFree, 0) => 2,
            (Subspace::SecondMomentFree, 1) => 1,
            (Subspace::SecondMomentFree, _) => 0,
        }
    }
}

/// Eigenvalues of one `(n, α, subspace)` problem at two resolutions.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub n: i32,
    pub alpha: f64,
    pub subspace: Subspace,
    pub resolutions: [usize; 2],
    /// Fine-resolution eigenvalues sorted by decreasing real part.
    pub eigenvalues: Vec<Complex64>,
    pub trusted: Vec<bool>,
    pub coarse_eigenvalues: Vec<Complex64>,
    pub coarse_trusted: Vec<bool>,
    /// Fine-resolution eigenvectors in gram-orthonormal coordinates, aligned with `eigenvalues`.
    eigenvectors: Vec<Vec<Complex64>>,
    fine: Arc<OperatorMatrix>,
}

impl SpectrumResult {
    pub fn trusted_eigenvalues(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.eigenvalues.iter().zip(&self.trusted).filter(|(_, t)| **t).map(|(l, _)| *l)
    }

    pub fn max_trusted_re(&self) -> Option<f64> {
        self.trusted_eigenvalues().map(|l| l.re).reduce(f64::max)
    }

    pub fn fine_operator(&self) -> &Arc<OperatorMatrix> {
        &self.fine
    }

    /// Radial profile of the `k`-th eigenfunction, normalised in `X`.
    pub fn eigenfunction(&self, k: usize) -> Result<RadialProfile> {
        let y = self
            .eigenvectors
            .get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("no eigenvector {k}")))?;
        let c = self.fine.forms.basis_coefficients(y);
        self.fine.forms.synthesize(&c)
    }
}

fn deflated_block(m: &Mat<Complex64>, k: usize) -> Mat<Complex64> {
    let n = m.nrows() - k;
    Mat::from_fn(n, n, |i, j| m[(i + k, j + k)])
}

fn one_norm(a: &Mat<Complex64>) -> f64 {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn eigenpairs(m: &Mat<Complex64>) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let evd = m.eigen().map_err(|e| Error::EigenFailure { reason: format!("{e:?}"), condition: one_norm(m) })?;
    let s = evd.S();
    let u = evd.U();
    let n = m.nrows();
    let values: Vec<Complex64> = (0..n).map(|i| s[i]).collect();
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::EigenFailure { reason: "non-finite eigenvalue".into(), condition: one_norm(m) });
    }
    let vectors = (0..n)
        .map(|j| {
            let v: Vec<Complex64> = (0..n).map(|i| u[(i, j)]).collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|c| c / norm).collect()
        })
        .collect();
    Ok((values, vectors))
}

fn by_real_part(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im))
}

/// Greedy nearest-neighbour matching; returns trust flags for `coarse` and `fine`.
fn match_eigenvalues(coarse: &[Complex64], fine: &[Complex64], tol: f64) -> (Vec<bool>, Vec<bool>) {
    let mut ct = vec![false; coarse.len()];
    let mut ft = vec![false; fine.len()];
    for (i, c) in coarse.iter().enumerate() {
        let best = fine
            .iter()
            .enumerate()
            .filter(|(j, _)| !ft[*j])
            .map(|(j, f)| (j, (f - c).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((j, d)) = best {
            if d <= tol {
                ct[i] = true;
                ft[j] = true;
            }
        }
    }
    (ct, ft)
}

/// Fine basis size paired with a coarse size `n`.
pub fn fine_resolution(n: usize) -> usize {
    (3 * n).div_ceil(2)
}

/// Solves the eigenproblem of `op` on `subspace` and at the finer resolution `⌈1.5N⌉`,
/// trusting eigenvalues that agree within [`TRUST_TOLERANCE`].
pub fn eigen_spectrum(op: &OperatorMatrix, subspace: Subspace) -> Result<SpectrumResult> {
    let size = fine_resolution(op.size());
    let grid = Arc::new(RadialGrid::for_basis(size)?);
    let fine_forms = Arc::new(ModeForms::new(op.n, size, grid)?);
    let fine = OperatorMatrix::from_forms(fine_forms, op.alpha)?;
    spectrum_pair(op, Arc::new(fine), subspace)
}

pub(crate) fn spectrum_pair(coarse: &OperatorMatrix, fine: Arc<OperatorMatrix>, subspace: Subspace) -> Result<SpectrumResult> {
    let k = subspace.deflated(coarse.n);
    let (mut cv, _) = eigenpairs(&deflated_block(&coarse.matrix, k))?;
    cv.sort_by(by_real_part);
    let (fv, fvec) = eigenpairs(&deflated_block(&fine.matrix, k))?;
    let mut order: Vec<usize> = (0..fv.len()).collect();
    order.sort_by(|&a, &b| by_real_part(&fv[a], &fv[b]));
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| fv[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let mut y = vec![Complex64::default(); k];
            y.extend_from_slice(&fvec[i]);
            y
        })
        .collect();
    let (coarse_trusted, trusted) = match_eigenvalues(&cv, &eigenvalues, TRUST_TOLERANCE);
    Ok(SpectrumResult {
        n: coarse.n,
        alpha: coarse.alpha,
        subspace,
        resolutions: [coarse.size(), fine.size()],
        eigenvalues,
        trusted,
        coarse_eigenvalues: cv,
        coarse_trusted,
        eigenvectors,
        fine,
    })
}

/// Solves every `(n, α, subspace)` combination at resolutions `N` and `⌈1.5N⌉` with up to
/// `workers` threads. Results are ordered by `(n, α, subspace)` as given.
pub fn spectrum_sweep(
    modes: &[i32],
    alphas: &[f64],
    subspaces: &[Subspace],
    resolution: usize,
    workers: usize,
) -> Result<Vec<SpectrumResult>> {
    let coarse_grid = Arc::new(RadialGrid::for_basis(resolution)?);
    let fine_size = fine_resolution(resolution);
    let fine_grid = Arc::new(RadialGrid::for_basis(fine_size)?);
    let workers = workers.max(1).min(modes.len().max(1));
    let chunks: Vec<Vec<(usize, i32)>> = (0..workers)
        .map(|w| modes.iter().copied().enumerate().filter(|(i, _)| i % workers == w).collect())
        .collect();
    let per_mode = |n: i32| -> Result<Vec<SpectrumResult>> {
        let coarse_forms = Arc::new(ModeForms::new(n, resolution, coarse_grid.clone())?);
        let fine_forms = Arc::new(ModeForms::new(n, fine_size, fine_grid.clone())?);
        let mut out = Vec::new();
        for &alpha in alphas {
            let coarse = OperatorMatrix::from_forms(coarse_forms.clone(), alpha)?;
            let fine = Arc::new(OperatorMatrix::from_forms(fine_forms.clone(), alpha)?);
            for &sub in subspaces {
                out.push(spectrum_pair(&coarse, fine.clone(), sub)?);
            }
        }
        Ok(out)
    };
    let mut slots: Vec<Option<Result<Vec<SpectrumResult>>>> = (0..modes.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| scope.spawn(|| chunk.iter().map(|&(i, n)| (i, per_mode(n))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("spectrum worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    let mut out = Vec::new();
    for slot in slots {
        out.extend(slot.expect("every mode is assigned to a worker")?);
    }
    Ok(out)
}

/// A trusted eigenvalue that exceeds its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub n: i32,
    pub alpha: f64,
    pub subspace: Subspace,
    pub lambda: Complex64,
    pub bound: f64,
}

/// Largest trusted real part for one `(α, subspace)` pair over all modes checked.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxReal {
    pub alpha: f64,
    pub subspace: Subspace,
    pub max_re: f64,
    /// `bound − max_re`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundsReport {
    pub violations: Vec<Violation>,
    pub max_real: Vec<MaxReal>,
    pub checked: usize,
    pub untrusted_results: usize,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bound on trusted real parts for a subspace in `L²(m)`; `None` when nothing is asserted.
pub fn eigenvalue_bound(subspace: Subspace, alpha: f64, m: f64) -> Option<(f64, bool)> {
    let ess = (1.0 - m) / 2.0;
    match subspace {
        Subspace::Full => None,
        Subspace::ZeroMean => Some(((-0.5f64).max(ess), false)),
        Subspace::MomentFree => Some(((-1.0f64).max(ess), false)),
        Subspace::SecondMomentFree if alpha != 0.0 => Some(((-1.0f64).max(ess), true)),
        Subspace::SecondMomentFree => Some(((-1.0f64).max(ess), false)),
    }
}

/// Checks every trusted eigenvalue against [`eigenvalue_bound`]: non-strict bounds allow `tol`,
/// strict ones require `Re λ < bound`.
pub fn verify_bounds(results: &[SpectrumResult], m: f64, tol: f64) -> BoundsReport {
    let mut report = BoundsReport::default();
    for r in results {
        let Some((bound, strict)) = eigenvalue_bound(r.subspace, r.alpha, m) else { continue };
        if !r.trusted.iter().any(|t| *t) {
            report.untrusted_results += 1;
        }
        for l in r.trusted_eigenvalues() {
            report.checked += 1;
            let bad = if strict { l.re >= bound } else { l.re > bound + tol };
            if bad {
                report.violations.push(Violation { n: r.n, alpha: r.alpha, subspace: r.subspace, lambda: l, bound });
            }
        }
        if let Some(max_re) = r.max_trusted_re() {
            match report.max_real.iter_mut().find(|e| e.alpha == r.alpha && e.subspace == r.subspace) {
                Some(e) if e.max_re >= max_re => {}
                Some(e) => {
                    e.max_re = max_re;
                    e.gap = bound - max_re;
                }
                None => report.max_real.push(MaxReal { alpha: r.alpha, subspace: r.subspace, max_re, gap: bound - max_re }),
            }
        }
    }
    report
}

/// Radial window on which eigenfunction tails are fitted.
pub const TAIL_WINDOW: [f64; 2] = [8.0, 12.0];

/// Fit of `log|ω(r)| + r²/4 ≈ γ log(1 + r²) + c + q r²` over [`TAIL_WINDOW`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub gamma: f64,
    pub quadratic: f64,
    pub samples: usize,
    /// Bounded `γ` and negligible `q`.
    pub gaussian: bool,
}

const MAX_TAIL_GAMMA: f64 = 64.0;
const MAX_TAIL_QUADRATIC: f64 = 1e-2;

/// Checks that a profile decays like a polynomial times `e^{−r²/4}`.
pub fn eigenfunction_decay_check(profile: &RadialProfile) -> Result<TailFit> {
    let rows: Vec<[f64; 4]> = profile
        .grid()
        .nodes()
        .iter()
        .zip(&profile.values)
        .filter(|(r, v)| **r >= TAIL_WINDOW[0] && **r <= TAIL_WINDOW[1] && v.norm() > 0.0)
        .map(|(&r, v)| [(1.0 + r * r).ln(), 1.0, r * r, v.norm().ln() + r * r / 4.0])
        .collect();
    if rows.len() < 4 {
        return Err(Error::TooFewSamples { needed: 4, got: rows.len() });
    }
    let a = Mat::from_fn(rows.len(), 3, |i, j| rows[i][j]);
    let b = Mat::from_fn(rows.len(), 1, |i, _| rows[i][3]);
    let x = a.qr().solve_lstsq(&b);
    let (gamma, quadratic) = (x[(0, 0)], x[(2, 0)]);
    let gaussian = gamma.is_finite() && gamma.abs() <= MAX_TAIL_GAMMA && quadratic.abs() <= MAX_TAIL_QUADRATIC;
    Ok(TailFit { gamma, quadratic, samples: rows.len(), gaussian })
}

/// Decay of `‖e^{τA}R₀‖_X` sampled on `[0, τ_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupDecay {
    pub rate: f64,
    pub r_squared: f64,
    pub taus: Vec<f64>,
    pub norms: Vec<f64>,
    pub target: f64,
    pub tol: f64,
}

impl SemigroupDecay {
    pub fn passed(&self) -> bool {
        self.rate >= self.target - self.tol
    }
}

const DECAY_SAMPLES: usize = 40;

/// Propagates `r0` by the dense matrix exponential restricted to `subspace` and fits the decay
/// rate of the `X`-norm over the second half of `[0, tau_end]`.
pub fn semigroup_decay(
    op: &OperatorMatrix,
    r0: &RadialProfile,
    subspace: Subspace,
    mu_target: f64,
    tau_end: f64,
    tol: f64,
) -> Result<SemigroupDecay> {
    if !(tau_end > 0.0 && tau_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau_end must be positive, got {tau_end}")));
    }
    let c = op.forms.project(r0)?;
    let y = op.forms.to_orthonormal(&c);
    let k = subspace.deflated(op.n);
    let total = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let leak = y[..k].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if leak > 1e-8 * total {
        return Err(Error::InvalidArgument(format!(
            "initial profile has component {leak:e} outside the {} subspace",
            subspace.name()
        )));
    }
    let block = deflated_block(&op.matrix, k);
    let dt = tau_end / DECAY_SAMPLES as f64;
    let step = expm(&Mat::from_fn(block.nrows(), block.ncols(), |i, j| block[(i, j)] * dt));
    let mut state = Mat::from_fn(block.nrows(), 1, |i, _| y[i + k]);
    let mut taus = vec![0.0];
    let mut norms = vec![state.norm_l2()];
    for s in 1..=DECAY_SAMPLES {
        state = &step * &state;
        taus.push(s as f64 * dt);
        norms.push(state.norm_l2());
    }
    let fit = fit_exponential(&taus, &norms, (0.5 * tau_end, tau_end))?;
    Ok(SemigroupDecay { rate: fit.mu, r_squared: fit.r_squared, taus, norms, target: mu_target, tol })
}

/// Random profile of mode `forms.n()` in `subspace` with coefficients decaying like `e^{−j/8}`.
pub fn generic_profile(forms: &ModeForms, subspace: Subspace, seed: u64) -> Result<RadialProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (forms.n() as i64 as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let k = subspace.deflated(forms.n());
    let y: Vec<Complex64> = (0..forms.size())
        .map(|j| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            if j < k {
                Complex64::default()
            } else {
                Complex64::new(re, im) * (-(j as f64) / 8.0).exp()
            }
        })
        .collect();
    forms.synthesize(&forms.basis_coefficients(&y))
}

/// Writes `n, alpha, re_lambda, im_lambda, trusted, subspace, resolution` rows for both resolutions.
pub fn write_spectrum_csv<W: Write>(results: &[SpectrumResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "alpha", "re_lambda", "im_lambda", "trusted", "subspace", "resolution"])
        .map_err(csv_error)?;
    for r in results {
        let rows = r
            .coarse_eigenvalues
            .iter()
            .zip(&r.coarse_trusted)
            .map(|(l, t)| (l, t, r.resolutions[0]))
            .chain(r.eigenvalues.iter().zip(&r.trusted).map(|(l, t)| (l, t, r.resolutions[1])));
        for (l, t, res) in rows {
            w.write_record([
                r.n.to_string(),
                format!("{:?}", r.alpha),
                format!("{:e}", l.re),
                format!("{:e}", l.im),
                t.to_string(),
                r.subspace.name().to_string(),
                res.to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::operator::assemble_operator;
    use super::super::profile::radial_gaussian;
    use super::*;

    fn op(n: i32, alpha: f64, size: usize) -> OperatorMatrix {
        assemble_operator(n, alpha, &Arc::new(RadialGrid::for_basis(size).unwrap())).unwrap()
    }

    #[test]
    fn harmonic_oscillator_spectrum_at_zero_circulation() {
        for n in [0, 1, -2, 3] {
            let r = eigen_spectrum(&op(n, 0.0, 40), Subspace::Full).unwrap();
            for k in 0..=5 {
                let expect = -(n.abs() as f64 + 2.0 * k as f64) / 2.0;
                assert!(r.trusted[k], "n={n} k={k}");
                assert!((r.eigenvalues[k] - expect).norm() < 1e-9, "n={n} k={k} {}", r.eigenvalues[k]);
            }
        }
    }

    #[test]
    fn frozen_eigenvalues_persist() {
        let r1 = eigen_spectrum(&op(1, 37.0, 40), Subspace::ZeroMean).unwrap();
        assert!(r1.trusted[0] && (r1.eigenvalues[0] + 0.5).norm() < 1e-9, "{}", r1.eigenvalues[0]);
        let r0 = eigen_spectrum(&op(0, 37.0, 40), Subspace::Full).unwrap();
        assert!((r0.eigenvalues[0]).norm() < 1e-9 && (r0.eigenvalues[1] + 1.0).norm() < 1e-9);
        let r2 = eigen_spectrum(&op(0, 37.0, 40), Subspace::SecondMomentFree).unwrap();
        assert!((r2.eigenvalues[0] + 2.0).norm() < 1e-9);
    }

    #[test]
    fn rotation_pushes_quadrupole_below_minus_one() {
        let results: Vec<SpectrumResult> = [0.0, 10.0]
            .iter()
            .map(|&a| eigen_spectrum(&op(2, a, 40), Subspace::SecondMomentFree).unwrap())
            .collect();
        let report = verify_bounds(&results, 4.0, 1e-6);
        assert!(report.passed(), "{:?}", report.violations);
        let gap = report.max_real.iter().find(|m| m.alpha == 10.0).unwrap().gap;
        assert!(gap > 1e-3, "{gap}");
        assert!((results[0].max_trusted_re().unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn bound_violations_are_named() {
        let mut r = eigen_spectrum(&op(1, 0.0, 20), Subspace::ZeroMean).unwrap();
        r.subspace = Subspace::MomentFree;
        let report = verify_bounds(&[r], 4.0, 1e-6);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].n, 1);
        assert!((report.violations[0].lambda.re + 0.5).abs() < 1e-9);
    }

    #[test]
    fn frozen_profiles_decay_at_their_eigenvalue() {
        for alpha in [0.0, 3.0] {
            let o = op(1, alpha, 40);
            let f1 = RadialProfile::from_fn(1, o.grid().clone(), |r| r / 4.0 * radial_gaussian(r)).unwrap();
            let d = semigroup_decay(&o, &f1, Subspace::ZeroMean, 0.5, 6.0, 1e-6).unwrap();
            assert!((d.rate - 0.5).abs() < 1e-6 && d.passed(), "{}", d.rate);
            let o0 = op(0, alpha, 40);
            let lap = RadialProfile::from_fn(0, o0.grid().clone(), |r| (r * r / 4.0 - 1.0) * radial_gaussian(r)).unwrap();
            let d = semigroup_decay(&o0, &lap, Subspace::ZeroMean, 1.0, 6.0, 1e-6).unwrap();
            assert!((d.rate - 1.0).abs() < 1e-6, "{}", d.rate);
        }
    }

    #[test]
    fn generic_profiles_respect_the_spectral_bound() {
        let o = op(1, 0.0, 40);
        let p = generic_profile(&o.forms, Subspace::ZeroMean, 7).unwrap();
        let d = semigroup_decay(&o, &p, Subspace::ZeroMean, 0.5, 12.0, 1e-3).unwrap();
        assert!(d.passed() && d.rate < 0.51, "{}", d.rate);
        let p = generic_profile(&o.forms, Subspace::MomentFree, 7).unwrap();
        let d = semigroup_decay(&o, &p, Subspace::MomentFree, 1.0, 12.0, 1e-3).unwrap();
        assert!(d.passed(), "{}", d.rate);
        let f1 = RadialProfile::from_fn(1, o.grid().clone(), |r| r * radial_gaussian(r)).unwrap();
        assert!(semigroup_decay(&o, &f1, Subspace::MomentFree, 1.0, 12.0, 1e-3).is_err());
    }

    #[test]
    fn tails_of_frozen_profiles_are_gaussian() {
        let grid = Arc::new(RadialGrid::for_basis(40).unwrap());
        let f1 = RadialProfile::from_fn(1, grid.clone(), |r| r / 4.0 * radial_gaussian(r)).unwrap();
        let fit = eigenfunction_decay_check(&f1).unwrap();
        assert!(fit.gaussian && (fit.gamma - 0.5).abs() < 0.05, "{fit:?}");
        let lap = RadialProfile::from_fn(0, grid.clone(), |r| (r * r / 4.0 - 1.0) * radial_gaussian(r)).unwrap();
        let fit = eigenfunction_decay_check(&lap).unwrap();
        assert!(fit.gaussian && fit.gamma > 0.5 && fit.gamma < 2.0, "{fit:?}");
        let slow = RadialProfile::from_fn(0, grid, |r| (-r * r / 8.0).exp()).unwrap();
        assert!(!eigenfunction_decay_check(&slow).unwrap().gaussian);
    }

    #[test]
    fn computed_eigenfunctions_decay() {
        let r = eigen_spectrum(&op(2, 10.0, 40), Subspace::Full).unwrap();
        for k in 0..3 {
            let fit = eigenfunction_decay_check(&r.eigenfunction(k).unwrap()).unwrap();
            assert!(fit.gaussian, "{k} {fit:?}");
        }
    }

    #[test]
    fn spectrum_csv_has_both_resolutions() {
        let r = eigen_spectrum(&op(0, 0.0, 10), Subspace::ZeroMean).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "n,alpha,re_lambda,im_lambda,trusted,subspace,resolution");
        assert_eq!(text.lines().count(), 1 + 9 + 14);
        assert!(text.contains(",true,zero-mean,15"));
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let a = spectrum_sweep(&[0, 1, 2], &[0.0, 1.0], &[Subspace::ZeroMean], 12, 3).unwrap();
        let b = spectrum_sweep(&[0, 1, 2], &[0.0, 1.0], &[Subspace::ZeroMean], 12, 1).unwrap();
        let keys: Vec<(i32, f64)> = a.iter().map(|r| (r.n, r.alpha)).collect();
        assert_eq!(keys, vec![(0, 0.0), (0, 1.0), (1, 0.0), (1, 1.0), (2, 0.0), (2, 1.0)]);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.eigenvalues, y.eigenvalues);
        }
    }
}
