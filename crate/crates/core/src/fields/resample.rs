//! Band-limited (trigonometric) interpolation between periodic grids.

use std::f64::consts::PI;

use super::Grid2D;

/// Periodic sinc for an even number of nodes `n` with spacing `h`.
pub(crate) fn periodic_sinc(x: f64, n: usize, h: f64) -> f64 {
    let period = n as f64 * h;
    let mut x = x % period;
    if x > 0.5 * period {
        x -= period;
    } else if x <= -0.5 * period {
        x += period;
    }
    if x.abs() < 1e-14 * h {
        return 1.0;
    }
    (PI * x / h).sin() / (n as f64 * (PI * x / period).tan())
}

/// Interpolation matrix from the nodes of `src` (one axis) to arbitrary targets.
///
/// Targets outside `[-L, L)` of the source box get a zero row; the count of such rows is returned.
pub(crate) fn interpolation_matrix(src: &Grid2D, targets: &[f64]) -> (Vec<f64>, usize) {
    let n = src.n();
    let h = src.spacing();
    let l = src.half_width();
    let mut m = vec![0.0; targets.len() * n];
    let mut outside = 0;
    for (row, &y) in targets.iter().enumerate() {
        if y < -l - 1e-12 * l || y >= l {
            outside += 1;
            continue;
        }
        for j in 0..n {
            m[row * n + j] = periodic_sinc(y - src.coord(j), n, h);
        }
    }
    (m, outside)
}

/// `out = m · w · mᵀ` for a square source field, with `m` of shape `rows × n`.
pub(crate) fn apply_separable(m: &[f64], rows: usize, n: usize, w: &[f64]) -> Vec<f64> {
    // t = w · mᵀ  (n × rows)
    let mut t = vec![0.0; n * rows];
    unsafe {
        matrixmultiply::dgemm(
            n, n, rows, 1.0,
            w.as_ptr(), n as isize, 1,
            m.as_ptr(), 1, n as isize,
            0.0,
            t.as_mut_ptr(), rows as isize, 1,
        );
    }
    let mut out = vec![0.0; rows * rows];
    unsafe {
        matrixmultiply::dgemm(
            rows, n, rows, 1.0,
            m.as_ptr(), n as isize, 1,
            t.as_ptr(), rows as isize, 1,
            0.0,
            out.as_mut_ptr(), rows as isize, 1,
        );
    }
    out
}

/// Precomputed dilation `w ↦ w(ξ·factor)` from `src` to `dst`.
#[derive(Debug, Clone)]
pub struct Dilation {
    src: Grid2D,
    dst: Grid2D,
    factor: f64,
    matrix: Vec<f64>,
    outside: usize,
}

impl Dilation {
    pub fn new(src: &Grid2D, dst: &Grid2D, factor: f64) -> Self {
        let targets: Vec<f64> = (0..dst.n()).map(|i| dst.coord(i) * factor).collect();
        let (matrix, outside) = interpolation_matrix(src, &targets);
        Self { src: *src, dst: *dst, factor, matrix, outside }
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn src(&self) -> &Grid2D {
        &self.src
    }

    pub fn dst(&self) -> &Grid2D {
        &self.dst
    }

    /// Number of target coordinates (per axis) that fall outside the source box.
    pub fn outside_count(&self) -> usize {
        self.outside
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        apply_separable(&self.matrix, self.dst.n(), self.src.n(), values)
    }
}
