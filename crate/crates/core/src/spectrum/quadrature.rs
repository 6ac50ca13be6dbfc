//! Composite Gauss–Legendre quadrature on a radial half-line.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`, ascending.
pub(crate) fn gauss_legendre(p: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; p];
    let mut w = vec![0.0; p];
    for i in 0..p.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (p as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (pn, d) = legendre_with_derivative(p, z);
            dp = d;
            let dz = pn / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(p, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[p - 1 - i] = z;
        w[i] = wi;
        w[p - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(p: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if p == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=p {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// `P_0..P_{p}` at `z`.
fn legendre_all(p: usize, z: f64) -> Vec<f64> {
    let mut out = vec![1.0, z];
    for k in 2..=p {
        let v = ((2 * k - 1) as f64 * z * out[k - 1] - (k - 1) as f64 * out[k - 2]) / k as f64;
        out.push(v);
    }
    out.truncate(p + 1);
    out
}

/// `C[k][l] = ∫_{−1}^{x_k} ℓ_l`, with `ℓ_l` the Lagrange basis on the nodes.
fn integration_matrix(x: &[f64], w: &[f64]) -> Vec<Vec<f64>> {
    let p = x.len();
    let at_nodes: Vec<Vec<f64>> = x.iter().map(|&z| legendre_all(p, z)).collect();
    let antideriv: Vec<Vec<f64>> = at_nodes
        .iter()
        .zip(x)
        .map(|(pl, &z)| {
            (0..p)
                .map(|j| if j == 0 { z + 1.0 } else { (pl[j + 1] - pl[j - 1]) / (2 * j + 1) as f64 })
                .collect()
        })
        .collect();
    (0..p)
        .map(|k| {
            (0..p)
                .map(|l| {
                    w[l] * (0..p).map(|j| (2 * j + 1) as f64 / 2.0 * at_nodes[l][j] * antideriv[k][j]).sum::<f64>()
                })
                .collect()
        })
        .collect()
}

/// Radial nodes `r_k ∈ (0, R_max)` on equal panels with Gauss–Legendre points in each.
///
/// `weights` integrate `∫₀^{R_max} f(r) r dr`; `dr_weights` integrate `∫ f(r) dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dr_weights: Vec<f64>,
    r_max: f64,
    panels: usize,
    order: usize,
    cumulative: Vec<Vec<f64>>,
    reference_weights: Vec<f64>,
    resolution: Option<usize>,
}

impl RadialGrid {
    pub fn new(r_max: f64, panels: usize, order: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) || panels == 0 || order < 2 {
            return Err(Error::InvalidArgument(format!(
                "radial grid needs r_max > 0, panels ≥ 1, order ≥ 2 (got {r_max}, {panels}, {order})"
            )));
        }
        let (x, w) = gauss_legendre(order);
        let half = r_max / panels as f64 / 2.0;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut dr_weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = (2 * p + 1) as f64 * half;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                dr_weights.push(half * wi);
            }
        }
        let weights = nodes.iter().zip(&dr_weights).map(|(r, w)| r * w).collect();
        Ok(Self { nodes, weights, dr_weights, r_max, panels, order, cumulative: integration_matrix(&x, &w), reference_weights: w, resolution: None })
    }

    /// Grid sized for Laguerre bases with up to `basis_size` functions.
    pub fn for_basis(basis_size: usize) -> Result<Self> {
        let r_max = 4.0 * (basis_size as f64).sqrt() + 16.0;
        let panels = (2.0 * r_max).ceil() as usize;
        Ok(Self { resolution: Some(basis_size), ..Self::new(r_max, panels, 16)? })
    }

    /// Number of basis functions this grid was sized for.
    pub fn resolution(&self) -> Option<usize> {
        self.resolution
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dr_weights(&self) -> &[f64] {
        &self.dr_weights
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ f(r) r dr`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// `∫₀^{r_k} f dr` at every node.
    pub fn cumulative_from_origin(&self, f: &[f64]) -> Vec<f64> {
        let p = self.order;
        let half = self.r_max / self.panels as f64 / 2.0;
        let mut out = Vec::with_capacity(f.len());
        let mut base = 0.0;
        for panel in f.chunks(p) {
            for row in &self.cumulative {
                out.push(base + half * row.iter().zip(panel).map(|(c, v)| c * v).sum::<f64>());
            }
            base += half * self.dr_weights_ref_sum(panel);
        }
        out
    }

    /// `∫_{r_k}^{R_max} f dr` at every node.
    pub fn cumulative_to_end(&self, f: &[f64]) -> Vec<f64> {
        let p = self.order;
        let half = self.r_max / self.panels as f64 / 2.0;
        let mut out = vec![0.0; f.len()];
        let mut base = 0.0;
        for (pi, panel) in f.chunks(p).enumerate().rev() {
            let total = half * self.dr_weights_ref_sum(panel);
            for (k, row) in self.cumulative.iter().enumerate() {
                let head = half * row.iter().zip(panel).map(|(c, v)| c * v).sum::<f64>();
                out[pi * p + k] = base + (total - head);
            }
            base += total;
        }
        out
    }

    fn dr_weights_ref_sum(&self, panel: &[f64]) -> f64 {
        self.reference_weights.iter().zip(panel).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let i30: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((i30 - 2.0 / 31.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn gaussian_moment_to_ten_digits() {
        let g = RadialGrid::for_basis(120).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| (-r * r / 4.0).exp()).collect();
        assert!((g.integrate(&f) - 2.0).abs() < 1e-13);
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn cumulative_integrals() {
        let g = RadialGrid::new(20.0, 40, 16).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| r * (-r * r / 4.0).exp()).collect();
        let head = g.cumulative_from_origin(&f);
        let tail = g.cumulative_to_end(&f);
        for (k, r) in g.nodes().iter().enumerate() {
            let exact = 2.0 * (1.0 - (-r * r / 4.0).exp());
            assert!((head[k] - exact).abs() < 1e-14, "{k}");
            assert!((tail[k] - (2.0 - exact)).abs() < 1e-14, "{k}");
        }
    }
}
