//! Galerkin matrices of `ℒ_n − αΛ_n` in the Laguerre basis.

use std::sync::Arc;

use faer::{Mat, Side};
use num_complex::Complex64;

use super::basis::ModeBasis;
use super::profile::{angular_velocity, stream_omega, RadialProfile};
use super::quadrature::RadialGrid;
use crate::error::{Error, Result};

/// Smallest admissible outer radius for a basis of `size` functions.
fn required_radius(size: usize) -> f64 {
    4.0 * (size as f64).sqrt() + 12.0
}

/// Resolution-specific data that does not depend on `α`.
#[derive(Debug, Clone)]
pub struct ModeForms {
    pub basis: Arc<ModeBasis>,
    /// `⟨ω_i, ω_j⟩_X`.
    pub gram: Mat<f64>,
    /// `⟨ω_i, ℒ_n ω_j⟩_X`.
    pub l_form: Mat<f64>,
    /// `⟨ω_i, Λ_n ω_j⟩_X`.
    pub lambda_form: Mat<Complex64>,
    /// Lower Cholesky factor of `gram`.
    chol: Mat<f64>,
}

fn dense_form(weights: &[f64], left: &[Vec<f64>], right: &[Vec<f64>]) -> Mat<f64> {
    let weighted: Vec<Vec<f64>> =
        left.iter().map(|row| row.iter().zip(weights).map(|(a, w)| a * w).collect()).collect();
    Mat::from_fn(left.len(), right.len(), |i, j| weighted[i].iter().zip(&right[j]).map(|(a, b)| a * b).sum())
}

impl ModeForms {
    pub fn new(n: i32, size: usize, grid: Arc<RadialGrid>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("basis size must be positive".into()));
        }
        if grid.r_max() < required_radius(size) {
            return Err(Error::GridInadequate(format!(
                "outer radius {} below {} needed for {size} basis functions",
                grid.r_max(),
                required_radius(size)
            )));
        }
        let basis = Arc::new(ModeBasis::new(n, size, grid.clone()));
        let half: Vec<f64> = grid.weights().iter().map(|w| 0.5 * w).collect();
        let psi = basis.psi();
        let gram = dense_form(&half, psi, psi);
        let l_form = dense_form(&half, psi, basis.psi_l());
        let lambda_form = if n == 0 {
            Mat::zeros(size, size)
        } else {
            let nodes = grid.nodes();
            let phi_w: Vec<f64> = half.iter().zip(nodes).map(|(w, &r)| w * angular_velocity(r)).collect();
            let phi_form = dense_form(&phi_w, psi, psi);
            let decay: Vec<f64> = nodes.iter().map(|r| (-r * r / 8.0).exp()).collect();
            let mut omegas = Vec::with_capacity(size);
            for j in 0..size {
                let w: Vec<Complex64> = basis.function(j).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
                let om = stream_omega(&RadialProfile::new(n, w, grid.clone())?)?;
                omegas.push(om.values.iter().zip(&decay).map(|(o, d)| o.re * d).collect::<Vec<f64>>());
            }
            let k_form = dense_form(&half, psi, &omegas);
            let i_n = Complex64::new(0.0, n as f64);
            Mat::from_fn(size, size, |i, j| i_n * (phi_form[(i, j)] - k_form[(i, j)]))
        };
        let chol = match gram.llt(Side::Lower) {
            Ok(llt) => llt.L().to_owned(),
            Err(_) => {
                return Err(Error::GridInadequate(format!(
                    "gram matrix of mode {n} with {size} functions is not positive definite"
                )))
            }
        };
        Ok(Self { basis, gram, l_form, lambda_form, chol })
    }

    pub fn n(&self) -> i32 {
        self.basis.n()
    }

    pub fn size(&self) -> usize {
        self.basis.size()
    }

    /// `‖S − Sᵀ‖_F / ‖S‖_F` for `S = ⟨·, ℒ_n ·⟩_X`.
    pub fn symmetry_defect(&self) -> f64 {
        let s = &self.l_form;
        let n = s.nrows();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                num += (s[(i, j)] - s[(j, i)]).powi(2);
                den += s[(i, j)].powi(2);
            }
        }
        (num / den).sqrt()
    }

    /// `‖S + Sᴴ‖_F / ‖S‖_F` for `S = ⟨·, Λ_n ·⟩_X`; zero for `n = 0`.
    pub fn skew_defect(&self) -> f64 {
        let s = &self.lambda_form;
        let n = s.nrows();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                num += (s[(i, j)] + s[(j, i)].conj()).norm_sqr();
                den += s[(i, j)].norm_sqr();
            }
        }
        if den == 0.0 {
            0.0
        } else {
            (num / den).sqrt()
        }
    }

    /// Largest eigenvalue of the symmetric part of `ℒ_n` relative to `gram`.
    pub fn l_upper_bound(&self) -> Result<f64> {
        let n = self.size();
        let sym = Mat::from_fn(n, n, |i, j| 0.5 * (self.l_form[(i, j)] + self.l_form[(j, i)]));
        let c = self.congruence(&sym.as_ref().map(|v| Complex64::new(*v, 0.0)));
        let h = Mat::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)].conj()));
        let ev = h.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::EigenFailure {
            reason: format!("{e:?}"),
            condition: f64::NAN,
        })?;
        Ok(ev.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    /// `L⁻¹ S L⁻ᵀ`, the form `S` in gram-orthonormal coordinates.
    pub(crate) fn congruence(&self, s: &Mat<Complex64>) -> Mat<Complex64> {
        let l = self.chol.as_ref().map(|v| Complex64::new(*v, 0.0));
        let mut y = s.clone();
        l.solve_lower_triangular_in_place(y.as_mut());
        let mut yt = y.transpose().to_owned();
        l.solve_lower_triangular_in_place(yt.as_mut());
        yt.transpose().to_owned()
    }

    /// Orthonormal coordinates `Lᵀc` of basis coefficients `c`.
    pub(crate) fn to_orthonormal(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        (0..n).map(|i| (i..n).map(|k| c[k] * self.chol[(k, i)]).sum()).collect()
    }

    /// Basis coefficients `L⁻ᵀy` of orthonormal coordinates `y`.
    pub(crate) fn basis_coefficients(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        let mut c = vec![Complex64::default(); n];
        for i in (0..n).rev() {
            let acc: Complex64 = (i + 1..n).map(|k| c[k] * self.chol[(k, i)]).sum();
            c[i] = (y[i] - acc) / self.chol[(i, i)];
        }
        c
    }

    /// Basis coefficients of the `X`-orthogonal projection of a profile.
    pub fn project(&self, profile: &RadialProfile) -> Result<Vec<Complex64>> {
        if profile.n != self.n() {
            return Err(Error::InvalidArgument(format!("profile of mode {} for basis of mode {}", profile.n, self.n())));
        }
        if profile.grid().as_ref() != self.basis.grid().as_ref() {
            return Err(Error::GridMismatch("profile and basis live on different radial grids".into()));
        }
        let b = self.basis.inner_products(&profile.values);
        let mut rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
        let l = self.chol.as_ref().map(|v| Complex64::new(*v, 0.0));
        l.solve_lower_triangular_in_place(rhs.as_mut());
        let y: Vec<Complex64> = (0..b.len()).map(|i| rhs[(i, 0)]).collect();
        Ok(self.basis_coefficients(&y))
    }

    pub fn synthesize(&self, coeffs: &[Complex64]) -> Result<RadialProfile> {
        RadialProfile::new(self.n(), self.basis.synthesize(coeffs), self.basis.grid().clone())
    }
}

/// Dense matrix of `ℒ_n − αΛ_n` in gram-orthonormal coordinates, together with the forms it is built from.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub n: i32,
    pub alpha: f64,
    pub forms: Arc<ModeForms>,
    /// `L⁻¹(⟨·,ℒ_n·⟩ − α⟨·,Λ_n·⟩)L⁻ᵀ` with `gram = LLᵀ`.
    pub matrix: Mat<Complex64>,
}

impl OperatorMatrix {
    pub fn from_forms(forms: Arc<ModeForms>, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
        }
        let n = forms.size();
        let s = Mat::from_fn(n, n, |i, j| Complex64::new(forms.l_form[(i, j)], 0.0) - alpha * forms.lambda_form[(i, j)]);
        let matrix = forms.congruence(&s);
        Ok(Self { n: forms.n(), alpha, forms, matrix })
    }

    pub fn size(&self) -> usize {
        self.forms.size()
    }

    pub fn gram(&self) -> &Mat<f64> {
        &self.forms.gram
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.forms.basis.grid()
    }
}

/// Assembles `ℒ_n − αΛ_n` with as many basis functions as the grid's resolution.
pub fn assemble_operator(n: i32, alpha: f64, grid: &Arc<RadialGrid>) -> Result<OperatorMatrix> {
    let size = grid.resolution().ok_or_else(|| {
        Error::GridInadequate("radial grid carries no basis resolution; build it with RadialGrid::for_basis".into())
    })?;
    OperatorMatrix::from_forms(Arc::new(ModeForms::new(n, size, grid.clone())?), alpha)
}
