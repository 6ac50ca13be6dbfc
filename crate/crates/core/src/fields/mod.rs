//! Grids, sampled fields, weighted norms, moments and the spectral projections
//! onto the frozen subspaces.

mod dump;
mod fft;
mod resample;

pub use dump::{read_dump, write_dump};
pub use fft::Spectral2D;
pub use resample::Dilation;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vortex;

/// Square uniform periodic grid on `[-L, L)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    n: usize,
    half_width: f64,
}

impl Grid2D {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("grid size {n} must be a power of two >= 4")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument(format!("half width {half_width} must be positive")));
        }
        Ok(Self { n, half_width })
    }

    /// Default box for nonlinear runs: `n = 256`, `L = 12`.
    pub fn standard() -> Self {
        Self { n: 256, half_width: 12.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Coordinates in storage order (row-major, first index along `ξ₁`).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n;
        (0..n * n).map(move |idx| (self.coord(idx / n), self.coord(idx % n)))
    }
}

/// Which variables a field is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Self-similar variables `(ξ, τ)`.
    Scaled,
    /// Physical variables `(x, t)`.
    Unscaled,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Scaled => "scaled",
            Frame::Unscaled => "unscaled",
        }
    }
}

/// Non-fatal numerical diagnostics attached to results.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Samples were requested outside the box while the field at the box edge was
    /// `boundary_ratio` times its maximum.
    Truncation { boundary_ratio: f64 },
    /// Courant number `max|v|·dt/h` above the configured limit.
    Cfl { step: usize, courant: f64 },
}

/// Real field sampled on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid2D,
    values: Vec<f64>,
    frame: Frame,
    time: f64,
    pub warnings: Vec<Warning>,
}

impl ScalarField {
    pub fn new(grid: Grid2D, values: Vec<f64>, frame: Frame, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.n(),
                grid.n()
            )));
        }
        check_time(frame, time)?;
        let field = Self { grid, values, frame, time, warnings: Vec::new() };
        field.ensure_finite()?;
        Ok(field)
    }

    pub fn zeros(grid: Grid2D, frame: Frame, time: f64) -> Self {
        Self { grid, values: vec![0.0; grid.len()], frame, time, warnings: Vec::new() }
    }

    /// Samples `f(ξ₁, ξ₂)` in the scaled frame at `τ = 0`.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid.points().map(|(x, y)| f(x, y)).collect();
        Self { grid, values, frame: Frame::Scaled, time: 0.0, warnings: Vec::new() }
    }

    /// Replaces the samples, keeping grid, frame and time.
    pub fn with_values(mut self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.grid.len(), "sample count must match the grid");
        self.values = values;
        self
    }

    pub(crate) fn from_parts(grid: Grid2D, values: Vec<f64>, frame: Frame, time: f64) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, frame, time, warnings: Vec::new() }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn with_frame(mut self, frame: Frame, time: f64) -> Result<Self> {
        check_time(frame, time)?;
        self.frame = frame;
        self.time = time;
        Ok(self)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n() + j]
    }

    pub fn ensure_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFinite { index }),
            None => Ok(()),
        }
    }

    pub fn require_frame(&self, frame: Frame) -> Result<()> {
        if self.frame != frame {
            return Err(Error::FrameMismatch { expected: frame.name() });
        }
        Ok(())
    }

    fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `self + a·other`, keeping the frame and time of `self`.
    pub fn add_scaled(&self, a: f64, other: &ScalarField) -> Result<ScalarField> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x + a * y).collect();
        Ok(Self::from_parts(self.grid, values, self.frame, self.time))
    }

    pub fn scaled(&self, a: f64) -> ScalarField {
        let values = self.values.iter().map(|x| a * x).collect();
        Self::from_parts(self.grid, values, self.frame, self.time)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest magnitude on the outermost ring of cells relative to the global maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.grid.n();
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0_f64;
        for k in 0..n {
            edge = edge
                .max(self.at(0, k).abs())
                .max(self.at(n - 1, k).abs())
                .max(self.at(k, 0).abs())
                .max(self.at(k, n - 1).abs());
        }
        edge / max
    }

    /// Riemann sum of `f(ξ₁, ξ₂, w)` over the grid.
    pub fn integrate(&self, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let sum: f64 = self.grid.points().zip(&self.values).map(|((x, y), &w)| f(x, y, w)).sum();
        sum * self.grid.cell_area()
    }
}

fn check_time(frame: Frame, time: f64) -> Result<()> {
    let ok = match frame {
        Frame::Scaled => time >= 0.0,
        Frame::Unscaled => time >= 0.0,
    } && time.is_finite();
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("time stamp {time} not valid in the {} frame", frame.name())))
    }
}

/// Two-component field on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid2D,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub warnings: Vec<Warning>,
}

impl VectorField {
    pub fn new(grid: Grid2D, v1: Vec<f64>, v2: Vec<f64>) -> Result<Self> {
        if v1.len() != grid.len() || v2.len() != grid.len() {
            return Err(Error::GridMismatch("velocity components have the wrong length".into()));
        }
        Ok(Self { grid, v1, v2, warnings: Vec::new() })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self { grid, v1: vec![0.0; grid.len()], v2: vec![0.0; grid.len()], warnings: Vec::new() }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn max_speed(&self) -> f64 {
        self.v1.iter().zip(&self.v2).fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)))
    }

    /// `(Σ |v|² h²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.v1.iter().zip(&self.v2).map(|(a, b)| a * a + b * b).sum();
        (s * self.grid.cell_area()).sqrt()
    }

    /// Relative L² distance `‖self − other‖ / ‖other‖`.
    pub fn relative_l2_error(&self, other: &VectorField) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.v1.len() {
            num += (self.v1[i] - other.v1[i]).powi(2) + (self.v2[i] - other.v2[i]).powi(2);
            den += other.v1[i].powi(2) + other.v2[i].powi(2);
        }
        if den == 0.0 {
            return num.sqrt();
        }
        (num / den).sqrt()
    }

    /// Max of the spectral divergence relative to the max spectral gradient magnitude.
    pub fn relative_divergence(&self) -> f64 {
        let fft = Spectral2D::new(&self.grid);
        let div = fft.divergence(&self.v1, &self.v2);
        let [a, b] = fft.gradient(&fft.forward(&self.v1));
        let [c, d] = fft.gradient(&fft.forward(&self.v2));
        let scale = a.iter().chain(&b).chain(&c).chain(&d).fold(0.0_f64, |m, v| m.max(v.abs()));
        let max_div = div.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            max_div
        } else {
            max_div / scale
        }
    }
}

/// Mass, first moments and second radial moment of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub mu2: f64,
}

impl MomentSet {
    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta1.is_finite() && self.beta2.is_finite() && self.mu2.is_finite()
    }
}

/// `‖w‖_m = (∫ (1+|ξ|²)^m w²)^{1/2}`.
pub fn weighted_norm(w: &ScalarField, m: f64) -> Result<f64> {
    w.require_frame(Frame::Scaled)?;
    w.ensure_finite()?;
    if !(m >= 0.0) {
        return Err(Error::InvalidArgument(format!("weight exponent {m} must be nonnegative")));
    }
    Ok(w.integrate(|x, y, v| (1.0 + x * x + y * y).powf(m) * v * v).sqrt())
}

/// Exponent of an Lᵖ norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

/// Riemann-sum Lᵖ norm; `p = ∞` returns `max |w|`.
pub fn lp_norm(w: &ScalarField, p: LpExponent) -> Result<f64> {
    w.ensure_finite()?;
    match p {
        LpExponent::Infinity => Ok(w.max_abs()),
        LpExponent::Finite(p) if p >= 1.0 && p.is_finite() => {
            Ok(w.integrate(|_, _, v| v.abs().powf(p)).powf(1.0 / p))
        }
        LpExponent::Finite(p) => Err(Error::InvalidArgument(format!("Lp exponent {p} must be >= 1"))),
    }
}

pub fn moments(w: &ScalarField) -> MomentSet {
    let h2 = w.grid().cell_area();
    let (mut a, mut b1, mut b2, mut m2) = (0.0, 0.0, 0.0, 0.0);
    for ((x, y), &v) in w.grid().points().zip(w.values()) {
        a += v;
        b1 += x * v;
        b2 += y * v;
        m2 += (x * x + y * y) * v;
    }
    MomentSet { alpha: a * h2, beta1: b1 * h2, beta2: b2 * h2, mu2: m2 * h2 }
}

/// `(∫ξ₁²w, ∫ξ₂²w, ∫ξ₁ξ₂w)`.
pub fn quadratic_moments(w: &ScalarField) -> [f64; 3] {
    let h2 = w.grid().cell_area();
    let mut m = [0.0; 3];
    for ((x, y), &v) in w.grid().points().zip(w.values()) {
        m[0] += x * x * v;
        m[1] += y * y * v;
        m[2] += x * y * v;
    }
    m.map(|s| s * h2)
}

/// Spectral subspaces pinned by the symmetries of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubspaceLevel {
    /// Zero total vorticity.
    ZeroMean = 0,
    /// Additionally zero first moments.
    MomentFree = 1,
    /// Additionally zero second radial moment.
    SecondMomentFree = 2,
}

/// Removes the components along `G` (always), `F₁, F₂` (level ≥ 1) and `ΔG` (level 2).
pub fn project_subspace(w: &ScalarField, level: SubspaceLevel) -> Result<ScalarField> {
    w.require_frame(Frame::Scaled)?;
    let mom = moments(w);
    let radial = w.integrate(|x, y, v| 0.25 * (x * x + y * y - 4.0) * v);
    let grid = *w.grid();
    let values = grid
        .points()
        .zip(w.values())
        .map(|((x, y), &v)| {
            let mut out = v - mom.alpha * vortex::gaussian(x, y);
            if level >= SubspaceLevel::MomentFree {
                let [f1, f2] = vortex::dipole_modes(x, y);
                out -= mom.beta1 * f1 + mom.beta2 * f2;
            }
            if level == SubspaceLevel::SecondMomentFree {
                out -= radial * vortex::laplacian_gaussian(x, y);
            }
            out
        })
        .collect();
    Ok(ScalarField::from_parts(grid, values, w.frame(), w.time()))
}

/// Translates `w` so that its first moments vanish; returns the shift `b = α⁻¹(β₁, β₂)`.
pub fn recenter(w: &ScalarField) -> Result<(ScalarField, [f64; 2])> {
    w.require_frame(Frame::Scaled)?;
    let mom = moments(w);
    let l1 = lp_norm(w, LpExponent::Finite(1.0))?;
    if mom.alpha.abs() < 1e-8 * l1 || mom.alpha == 0.0 {
        return Err(Error::ZeroCirculation { alpha: mom.alpha });
    }
    let b = [mom.beta1 / mom.alpha, mom.beta2 / mom.alpha];
    Ok((translate(w, b), b))
}

/// Band-limited translation `w ↦ w(· + b)`.
pub fn translate(w: &ScalarField, b: [f64; 2]) -> ScalarField {
    let fft = Spectral2D::new(w.grid());
    let mut spec = fft.forward(w.values());
    let n = w.grid().n();
    let k = fft.wavenumbers().to_vec();
    for i in 0..n {
        for j in 0..n {
            // Nyquist modes would pick up an imaginary part; drop them.
            let phase = if i == n / 2 || j == n / 2 {
                Complex64::default()
            } else {
                Complex64::from_polar(1.0, k[i] * b[0] + k[j] * b[1])
            };
            spec[i * n + j] *= phase;
        }
    }
    let mut out = ScalarField::from_parts(*w.grid(), fft.inverse_real(spec), w.frame(), w.time());
    let ratio = w.boundary_ratio();
    if ratio > 1e-10 {
        out.warnings.push(Warning::Truncation { boundary_ratio: ratio });
    }
    out
}

/// Band-limited evaluation of `w(ξ·factor)` on the same grid.
pub fn resample(w: &ScalarField, factor: f64) -> Result<ScalarField> {
    resample_to(w, w.grid(), factor)
}

/// Band-limited evaluation of `w(ξ·factor)` at the nodes of `dst`.
pub fn resample_to(w: &ScalarField, dst: &Grid2D, factor: f64) -> Result<ScalarField> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidArgument(format!("resample factor {factor} must be positive")));
    }
    let dil = Dilation::new(w.grid(), dst, factor);
    Ok(apply_dilation(w, &dil))
}

pub(crate) fn apply_dilation(w: &ScalarField, dil: &Dilation) -> ScalarField {
    let mut out = ScalarField::from_parts(*dil.dst(), dil.apply(w.values()), w.frame(), w.time());
    if dil.outside_count() > 0 {
        let ratio = w.boundary_ratio();
        if ratio > 1e-10 {
            out.warnings.push(Warning::Truncation { boundary_ratio: ratio });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian_field(grid: Grid2D) -> ScalarField {
        ScalarField::from_fn(grid, vortex::gaussian)
    }

    /// Tensor Gauss–Hermite style oracle: composite Simpson on a wide box, independent of the grid.
    fn simpson_2d(f: impl Fn(f64, f64) -> f64, half: f64, m: usize) -> f64 {
        let h = 2.0 * half / m as f64;
        let wt = |i: usize| if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let mut s = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                s += wt(i) * wt(j) * f(-half + i as f64 * h, -half + j as f64 * h);
            }
        }
        s * h * h / 9.0
    }

    #[test]
    fn weighted_norm_of_gaussian() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let g = gaussian_field(grid);
        let n0 = weighted_norm(&g, 0.0).unwrap();
        assert!((n0 - (1.0 / (8.0 * PI)).sqrt()).abs() < 1e-13);
        let oracle = simpson_2d(|x, y| (1.0 + x * x + y * y).powi(2) * vortex::gaussian(x, y).powi(2), 14.0, 1400)
            .sqrt();
        let n2 = weighted_norm(&g, 2.0).unwrap();
        assert!((n2 - oracle).abs() < 1e-9 * oracle, "{n2} vs {oracle}");
        assert!(n2 > n0);
        assert_eq!(weighted_norm(&ScalarField::zeros(grid, Frame::Scaled, 0.0), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn weighted_norm_rejects_nan() {
        let grid = Grid2D::new(8, 1.0).unwrap();
        let mut w = ScalarField::zeros(grid, Frame::Scaled, 0.0);
        w.values_mut()[5] = f64::NAN;
        assert!(matches!(weighted_norm(&w, 0.0), Err(Error::NonFinite { index: 5 })));
    }

    #[test]
    fn lp_norms_of_gaussian() {
        let g = gaussian_field(Grid2D::new(128, 12.0).unwrap());
        assert!((lp_norm(&g, LpExponent::Finite(1.0)).unwrap() - 1.0).abs() < 1e-13);
        assert!((lp_norm(&g, LpExponent::Infinity).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
        let l2 = lp_norm(&g, LpExponent::Finite(2.0)).unwrap();
        assert!((l2 - weighted_norm(&g, 0.0).unwrap()).abs() < 1e-15);
        assert!(lp_norm(&g, LpExponent::Finite(0.5)).is_err());
    }

    #[test]
    fn gaussian_family_moments() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let g = moments(&gaussian_field(grid));
        assert!((g.alpha - 1.0).abs() < 1e-13);
        assert!(g.beta1.abs() < 1e-14 && g.beta2.abs() < 1e-14);
        assert!((g.mu2 - 4.0).abs() < 1e-11);

        let f1 = moments(&ScalarField::from_fn(grid, |x, y| vortex::dipole_modes(x, y)[0]));
        assert!(f1.alpha.abs() < 1e-14);
        assert!((f1.beta1 - 1.0).abs() < 1e-12);
        assert!(f1.beta2.abs() < 1e-14 && f1.mu2.abs() < 1e-12);

        let lap = ScalarField::from_fn(grid, vortex::laplacian_gaussian);
        let m = moments(&lap);
        assert!(m.alpha.abs() < 1e-13 && m.beta1.abs() < 1e-14 && m.beta2.abs() < 1e-14);
        // ΔG has zero second radial moment only in the combination ∫¼(|ξ|²-4)ΔG = 1
        let proj = lap.integrate(|x, y, v| 0.25 * (x * x + y * y - 4.0) * v);
        assert!((proj - 1.0).abs() < 1e-11, "{proj}");
    }

    #[test]
    fn projections() {
        let grid = Grid2D::new(64, 12.0).unwrap();
        let g = gaussian_field(grid);
        let p = project_subspace(&g, SubspaceLevel::ZeroMean).unwrap();
        assert!(p.max_abs() < 1e-15);

        let f1 = ScalarField::from_fn(grid, |x, y| vortex::dipole_modes(x, y)[0]);
        let same = project_subspace(&f1, SubspaceLevel::ZeroMean).unwrap();
        assert!(same.add_scaled(-1.0, &f1).unwrap().max_abs() < 1e-16);
        let gone = project_subspace(&f1, SubspaceLevel::MomentFree).unwrap();
        assert!(gone.max_abs() < 1e-14);

        let lap = ScalarField::from_fn(grid, vortex::laplacian_gaussian);
        assert!(project_subspace(&lap, SubspaceLevel::SecondMomentFree).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn recenter_shifted_gaussian() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let (same, b0) = recenter(&gaussian_field(grid)).unwrap();
        assert!(b0[0].abs() < 1e-14 && b0[1].abs() < 1e-14);
        assert!(same.add_scaled(-1.0, &gaussian_field(grid)).unwrap().max_abs() < 1e-14);

        let shifted = ScalarField::from_fn(grid, |x, y| vortex::gaussian(x - 0.5, y));
        let (centered, b) = recenter(&shifted).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-12 && b[1].abs() < 1e-12);
        let m = moments(&centered);
        assert!(m.beta1.abs() < 1e-12 && m.beta2.abs() < 1e-12);

        let f1 = ScalarField::from_fn(grid, |x, y| vortex::dipole_modes(x, y)[0]);
        assert!(matches!(recenter(&f1), Err(Error::ZeroCirculation { .. })));
    }

    #[test]
    fn resample_identity_and_dilation() {
        let grid = Grid2D::new(128, 12.0).unwrap();
        let g = gaussian_field(grid);
        let same = resample(&g, 1.0).unwrap();
        assert!(same.add_scaled(-1.0, &g).unwrap().max_abs() < 1e-15);

        // e^τ G(ξ e^{τ/2}) is the Gaussian of variance 2e^{-τ}
        let tau: f64 = 0.7;
        let f = (tau / 2.0).exp();
        let out = resample(&g, f).unwrap().scaled(tau.exp());
        let var = 2.0 * (-tau).exp();
        let exact = ScalarField::from_fn(grid, |x, y| (-(x * x + y * y) / (2.0 * var)).exp() / (2.0 * PI * var));
        assert!(out.add_scaled(-1.0, &exact).unwrap().max_abs() < 1e-14);

        // width σ → σ/2 and mass 1/4
        let sigma = 1.5;
        let wide = ScalarField::from_fn(grid, |x, y| (-(x * x + y * y) / (2.0 * sigma * sigma)).exp());
        let narrow = resample(&wide, 2.0).unwrap();
        let expected = ScalarField::from_fn(grid, |x, y| {
            (-(x * x + y * y) / (2.0 * (sigma / 2.0) * (sigma / 2.0))).exp()
        });
        assert!(narrow.add_scaled(-1.0, &expected).unwrap().max_abs() < 1e-13);
        let m_wide = moments(&wide).alpha;
        let m_narrow = moments(&narrow).alpha;
        assert!((m_narrow / m_wide - 0.25).abs() < 1e-13);
    }

    #[test]
    fn resample_outside_box_warns_only_for_wide_fields() {
        let grid = Grid2D::new(64, 12.0).unwrap();
        let g = gaussian_field(grid);
        assert!(resample(&g, 2.0).unwrap().warnings.is_empty());
        let flat = ScalarField::from_fn(grid, |_, _| 1.0);
        let out = resample(&flat, 2.0).unwrap();
        assert!(matches!(out.warnings[0], Warning::Truncation { .. }));
        assert!(resample(&g, 0.0).is_err());
    }
}
