//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &Mat<Complex64>) -> f64 {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn combine(terms: &[(&Mat<Complex64>, f64)], n: usize, identity: f64) -> Mat<Complex64> {
    Mat::from_fn(n, n, |i, j| {
        let mut v: Complex64 = terms.iter().map(|(m, c)| m[(i, j)] * *c).sum();
        if i == j {
            v += identity;
        }
        v
    })
}

/// `e^A` for a square complex matrix.
pub fn expm(a: &Mat<Complex64>) -> Mat<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as u32 } else { 0 };
    let scale = 0.5f64.powi(squarings as i32);
    let a = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;
    let inner_u = combine(&[(&a6, b[13]), (&a4, b[11]), (&a2, b[9])], n, 0.0);
    let u_poly = &a6 * &inner_u;
    let u_rest = combine(&[(&u_poly, 1.0), (&a6, b[7]), (&a4, b[5]), (&a2, b[3])], n, b[1]);
    let u = &a * &u_rest;
    let inner_v = combine(&[(&a6, b[12]), (&a4, b[10]), (&a2, b[8])], n, 0.0);
    let v_poly = &a6 * &inner_v;
    let v = combine(&[(&v_poly, 1.0), (&a6, b[6]), (&a4, b[4]), (&a2, b[2])], n, b[0]);
    let p = combine(&[(&v, 1.0), (&u, 1.0)], n, 0.0);
    let q = combine(&[(&v, 1.0), (&u, -1.0)], n, 0.0);
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rotation() {
        let d = Mat::from_fn(3, 3, |i, j| if i == j { Complex64::new(-(i as f64) * 7.0, i as f64) } else { Complex64::default() });
        let e = expm(&d);
        for i in 0..3 {
            let exact = Complex64::new(-(i as f64) * 7.0, i as f64).exp();
            assert!((e[(i, i)] - exact).norm() < 1e-14 * (1.0 + exact.norm()));
        }
        let t = 40.0;
        let rot = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(-t, 0.0),
            (1, 0) => Complex64::new(t, 0.0),
            _ => Complex64::default(),
        });
        let e = expm(&rot);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn jordan_block() {
        let j = Mat::from_fn(2, 2, |i, k| match (i, k) {
            (0, 0) | (1, 1) => Complex64::new(-2.0, 0.0),
            (0, 1) => Complex64::new(1.0, 0.0),
            _ => Complex64::default(),
        });
        let e = expm(&j);
        let x = (-2.0f64).exp();
        assert!((e[(0, 1)].re - x).abs() < 1e-15 && (e[(0, 0)].re - x).abs() < 1e-15);
    }
}
