//! Laguerre functions orthonormal in the Gaussian-weighted inner product.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::quadrature::RadialGrid;

/// `c_j h(s) L_{j−a}^{(m+a)}(s)` for `a = 0, 1, 2`, with `h = s^{m/2} e^{−s/2}`
/// and `c_j = (j!/(j+m)!)^{1/2}`.
fn scaled_families(m: usize, size: usize, s: f64) -> [Vec<f64>; 3] {
    let h = if m == 0 { (-0.5 * s).exp() } else { (0.5 * m as f64 * s.ln() - 0.5 * s).exp() };
    let family = |a: usize, len: usize| -> Vec<f64> {
        let af = (m + a) as f64;
        let mut out = Vec::with_capacity(len);
        if len > 0 {
            out.push(h);
        }
        if len > 1 {
            out.push(h * (1.0 + af - s));
        }
        for k in 1..len.saturating_sub(1) {
            let kf = k as f64;
            let next = ((2.0 * kf + af + 1.0 - s) * out[k] - (kf + af) * out[k - 1]) / (kf + 1.0);
            out.push(next);
        }
        out
    };
    let mut c = Vec::with_capacity(size);
    let mut cj = 1.0 / (1..=m).map(|k| k as f64).product::<f64>().sqrt();
    for j in 0..size {
        if j > 0 {
            cj *= (j as f64 / (j + m) as f64).sqrt();
        }
        c.push(cj);
    }
    let f0 = family(0, size);
    let f1 = family(1, size.saturating_sub(1));
    let f2 = family(2, size.saturating_sub(2));
    let p0 = (0..size).map(|j| c[j] * f0[j]).collect();
    let p1 = (0..size).map(|j| if j >= 1 { c[j] * f1[j - 1] } else { 0.0 }).collect();
    let p2 = (0..size).map(|j| if j >= 2 { c[j] * f2[j - 2] } else { 0.0 }).collect();
    [p0, p1, p2]
}

/// Basis `ω_j(r) = e^{−s/2} Ψ_j(s) / 4π`, `s = r²/4`, for one azimuthal mode, sampled on a radial grid.
///
/// `Ψ_j` are the standard Laguerre functions of order `|n|`; the `ω_j` are orthonormal for
/// `⟨a, b⟩ = 2π ∫ ā b G⁻¹ r dr`.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    n: i32,
    size: usize,
    grid: Arc<RadialGrid>,
    /// `Ψ_j(s_k)`.
    psi: Vec<Vec<f64>>,
    /// `e^{s/2} · 4π ℒ_n ω_j` at the nodes.
    psi_l: Vec<Vec<f64>>,
}

impl ModeBasis {
    pub fn new(n: i32, size: usize, grid: Arc<RadialGrid>) -> Self {
        let m = n.unsigned_abs() as usize;
        let mf = m as f64;
        let q = grid.len();
        let mut psi = vec![vec![0.0; q]; size];
        let mut psi_l = vec![vec![0.0; q]; size];
        for (k, &r) in grid.nodes().iter().enumerate() {
            let s = r * r / 4.0;
            let [p0, p1, p2] = scaled_families(m, size, s);
            let a = mf / (2.0 * s) - 0.5;
            let da = -mf / (2.0 * s * s);
            let pot = 0.5 - s / 4.0 - mf * mf / (4.0 * s);
            for j in 0..size {
                let d1 = a * p0[j] - p1[j];
                let d2 = (a * a + da) * p0[j] - 2.0 * a * p1[j] + p2[j];
                psi[j][k] = p0[j];
                psi_l[j][k] = s * d2 + d1 + pot * p0[j];
            }
        }
        Self { n, size, grid, psi, psi_l }
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub(crate) fn psi(&self) -> &[Vec<f64>] {
        &self.psi
    }

    pub(crate) fn psi_l(&self) -> &[Vec<f64>] {
        &self.psi_l
    }

    /// `ω_j` at the grid nodes.
    pub fn function(&self, j: usize) -> Vec<f64> {
        self.grid
            .nodes()
            .iter()
            .zip(&self.psi[j])
            .map(|(r, p)| (-r * r / 8.0).exp() * p / (4.0 * PI))
            .collect()
    }

    /// `Σ c_j ω_j` at the grid nodes.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.grid.len()];
        for (c, psi) in coeffs.iter().zip(&self.psi) {
            for (o, p) in out.iter_mut().zip(psi) {
                *o += c * p;
            }
        }
        for (o, r) in out.iter_mut().zip(self.grid.nodes()) {
            *o *= (-r * r / 8.0).exp() / (4.0 * PI);
        }
        out
    }

    /// `⟨ω_j, v⟩_X` for every `j`.
    pub fn inner_products(&self, values: &[Complex64]) -> Vec<Complex64> {
        let weighted: Vec<Complex64> = self
            .grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(values)
            .map(|((r, w), v)| v * (2.0 * PI * w * (r * r / 8.0).exp()))
            .collect();
        self.psi.iter().map(|psi| psi.iter().zip(&weighted).map(|(p, v)| v * p).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_match_closed_forms() {
        let s: f64 = 1.7;
        let [p0, p1, p2] = scaled_families(1, 4, s);
        let h = s.sqrt() * (-s / 2.0).exp();
        // L_2^{(1)}(s) = (s² − 6s + 6)/2 and c_2 = (2/6)^{1/2}
        let c2 = (2.0f64 / 6.0).sqrt();
        assert!((p0[2] - c2 * h * (s * s - 6.0 * s + 6.0) / 2.0).abs() < 1e-14);
        assert!((p1[2] - c2 * h * (3.0 - s)).abs() < 1e-14);
        assert!((p2[2] - c2 * h).abs() < 1e-14);
    }

    #[test]
    fn basis_is_orthonormal() {
        let grid = Arc::new(RadialGrid::for_basis(120).unwrap());
        for n in [0, 1, 3] {
            let b = ModeBasis::new(n, 120, grid.clone());
            for (i, j) in [(0, 0), (5, 5), (119, 119), (0, 1), (7, 90), (118, 119)] {
                let g: f64 = (0..grid.len()).map(|k| 0.5 * grid.weights()[k] * b.psi[i][k] * b.psi[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-12, "n={n} ({i},{j}) {g}");
            }
        }
    }

    #[test]
    fn oseen_profile_is_first_function() {
        let grid = Arc::new(RadialGrid::for_basis(20).unwrap());
        let b = ModeBasis::new(0, 3, grid.clone());
        let w0 = b.function(0);
        for (r, v) in grid.nodes().iter().zip(&w0) {
            let g = (-r * r / 4.0).exp() / (4.0 * PI);
            assert!((v - g).abs() < 1e-15);
        }
    }
}
