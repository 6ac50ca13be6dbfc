//! Two-dimensional FFT helper for the periodic box.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Grid2D;

/// FFT plans and wavenumber tables for one [`Grid2D`].
///
/// Forward transforms are unnormalized; [`Spectral2D::inverse_real`] divides by `n²`.
/// Storage is row-major with the first index along `ξ₁`.
#[derive(Clone)]
pub struct Spectral2D {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Angular wavenumber of each FFT index (fftfreq order).
    k: Vec<f64>,
    /// Same as `k` with the Nyquist entry zeroed, for odd derivatives.
    k_odd: Vec<f64>,
    dealias: Vec<bool>,
}

impl std::fmt::Debug for Spectral2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral2D").field("n", &self.n).finish()
    }
}

impl Spectral2D {
    pub fn new(grid: &Grid2D) -> Self {
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let period = 2.0 * grid.half_width();
        let k: Vec<f64> = (0..n)
            .map(|i| {
                let m = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
                2.0 * PI * m / period
            })
            .collect();
        let mut k_odd = k.clone();
        k_odd[n / 2] = 0.0;
        // two-thirds rule on each axis
        let cut = n / 3;
        let dealias = (0..n)
            .map(|i| {
                let m = if i <= n / 2 { i } else { n - i };
                m <= cut
            })
            .collect();
        Self { n, forward, inverse, k, k_odd, dealias }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    /// Wavenumbers with the Nyquist entry zeroed, for odd-order derivatives.
    pub fn odd_wavenumbers(&self) -> &[f64] {
        &self.k_odd
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose_in_place(data, n);
        plan.process_with_scratch(data, &mut scratch);
        transpose_in_place(data, n);
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    pub fn inverse_complex(&self, mut spec: Vec<Complex64>) -> Vec<Complex64> {
        self.transform(&mut spec, &self.inverse);
        let scale = 1.0 / (self.n * self.n) as f64;
        for c in spec.iter_mut() {
            *c *= scale;
        }
        spec
    }

    pub fn inverse_real(&self, spec: Vec<Complex64>) -> Vec<f64> {
        self.inverse_complex(spec).into_iter().map(|c| c.re).collect()
    }

    /// Multiplies each coefficient by `f(k1, k2)`.
    pub fn apply_multiplier(&self, spec: &mut [Complex64], f: impl Fn(f64, f64) -> Complex64) {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                spec[i * n + j] *= f(self.k[i], self.k[j]);
            }
        }
    }

    /// Spectral gradient of a real field given its forward transform.
    pub fn gradient(&self, spec: &[Complex64]) -> [Vec<f64>; 2] {
        let n = self.n;
        let mut d1 = spec.to_vec();
        let mut d2 = spec.to_vec();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                d1[idx] *= Complex64::new(0.0, self.k_odd[i]);
                d2[idx] *= Complex64::new(0.0, self.k_odd[j]);
            }
        }
        [self.inverse_real(d1), self.inverse_real(d2)]
    }

    /// Spectral Laplacian of a real field given its forward transform.
    pub fn laplacian(&self, spec: &[Complex64]) -> Vec<f64> {
        let n = self.n;
        let mut out = spec.to_vec();
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] *= -(self.k[i] * self.k[i] + self.k[j] * self.k[j]);
            }
        }
        self.inverse_real(out)
    }

    /// Zeroes coefficients outside the two-thirds band.
    pub fn dealias(&self, spec: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if !(self.dealias[i] && self.dealias[j]) {
                    spec[i * n + j] = Complex64::default();
                }
            }
        }
    }

    /// Spectral divergence of the periodic vector field `(v1, v2)`.
    pub fn divergence(&self, v1: &[f64], v2: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut s1 = self.forward(v1);
        let s2 = self.forward(v2);
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                s1[idx] = s1[idx] * Complex64::new(0.0, self.k_odd[i])
                    + s2[idx] * Complex64::new(0.0, self.k_odd[j]);
            }
        }
        self.inverse_real(s1)
    }
}

fn transpose_in_place<T: Copy>(data: &mut [T], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_a_trig_mode() {
        let grid = Grid2D::new(32, PI).unwrap();
        let fft = Spectral2D::new(&grid);
        let vals: Vec<f64> = grid.points().map(|(x, y)| (2.0 * x).sin() * y.cos()).collect();
        let spec = fft.forward(&vals);
        let [d1, d2] = fft.gradient(&spec);
        for (idx, (x, y)) in grid.points().enumerate() {
            assert!((d1[idx] - 2.0 * (2.0 * x).cos() * y.cos()).abs() < 1e-12);
            assert!((d2[idx] + (2.0 * x).sin() * y.sin()).abs() < 1e-12);
        }
        let lap = fft.laplacian(&spec);
        for (idx, v) in vals.iter().enumerate() {
            assert!((lap[idx] + 5.0 * v).abs() < 1e-11);
        }
    }

    #[test]
    fn round_trip() {
        let grid = Grid2D::new(16, 3.0).unwrap();
        let fft = Spectral2D::new(&grid);
        let vals: Vec<f64> = (0..256).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let back = fft.inverse_real(fft.forward(&vals));
        for (a, b) in vals.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
