use approx::assert_relative_eq;
use oseen_core::fields::{
    moments, project_subspace, read_dump, translate, weighted_norm, write_dump, SubspaceLevel,
};
use oseen_core::vortex::{dipole_modes, gaussian, laplacian_gaussian};
use oseen_core::{Frame, Grid2D, ScalarField};
use proptest::prelude::*;

fn grid() -> Grid2D {
    Grid2D::new(64, 12.0).unwrap()
}

/// `a G + b F₁ + c F₂ + d ΔG` evaluated at `ξ − s`.
fn combo(a: f64, b: f64, c: f64, d: f64, s: [f64; 2]) -> ScalarField {
    ScalarField::from_fn(grid(), |x, y| {
        let (x, y) = (x - s[0], y - s[1]);
        let [f1, f2] = dipole_modes(x, y);
        a * gaussian(x, y) + b * f1 + c * f2 + d * laplacian_gaussian(x, y)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weighted_norm_grows_with_m(a in -2.0..2.0f64, b in -2.0..2.0f64, s in -1.0..1.0f64, m in 0.0..3.0f64, dm in 0.0..2.0f64) {
        let w = combo(a, b, 0.3, 0.1, [s, 0.0]);
        prop_assert!(weighted_norm(&w, m).unwrap() <= weighted_norm(&w, m + dm).unwrap() * (1.0 + 1e-14));
    }

    #[test]
    fn moments_are_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, k in -3.0..3.0f64) {
        let u = combo(a, b, c, 0.0, [0.0, 0.0]);
        let v = combo(c, a, b, 1.0, [0.2, -0.1]);
        let sum = moments(&u.add_scaled(k, &v).unwrap());
        let (mu, mv) = (moments(&u), moments(&v));
        prop_assert!((sum.alpha - (mu.alpha + k * mv.alpha)).abs() < 1e-12);
        prop_assert!((sum.beta1 - (mu.beta1 + k * mv.beta1)).abs() < 1e-12);
        prop_assert!((sum.mu2 - (mu.mu2 + k * mv.mu2)).abs() < 1e-11);
        // closed forms: ∫G = 1, ∫ξ₁F₁ = 1, ∫ΔG = 0
        prop_assert!((mu.alpha - a).abs() < 1e-12 && (mu.beta1 - b).abs() < 1e-12 && (mu.beta2 - c).abs() < 1e-12);
    }

    #[test]
    fn projections_are_idempotent(a in -2.0..2.0f64, b in -2.0..2.0f64, s in -0.8..0.8f64) {
        let w = combo(a, b, -0.4, 0.7, [s, 0.5 * s]);
        for level in [SubspaceLevel::ZeroMean, SubspaceLevel::MomentFree, SubspaceLevel::SecondMomentFree] {
            let p = project_subspace(&w, level).unwrap();
            let pp = project_subspace(&p, level).unwrap();
            let diff = p.values().iter().zip(pp.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            prop_assert!(diff < 1e-13 * (1.0 + w.max_abs()));
            let m = moments(&p);
            prop_assert!(m.alpha.abs() < 1e-12);
            if level >= SubspaceLevel::MomentFree {
                prop_assert!(m.beta1.abs() < 1e-12 && m.beta2.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_round_trip(b1 in -1.0..1.0f64, b2 in -1.0..1.0f64) {
        let w = combo(1.0, 0.2, 0.0, 0.3, [0.0, 0.0]);
        let back = translate(&translate(&w, [b1, b2]), [-b1, -b2]);
        let err = w.values().iter().zip(back.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        let shifted = translate(&w, [b1, b2]);
        let exact = combo(1.0, 0.2, 0.0, 0.3, [-b1, -b2]);
        let err = shifted.values().iter().zip(exact.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10, "{err}");
    }
}

#[test]
fn dump_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.field");
    let w = combo(1.0, -0.3, 0.2, 0.05, [0.1, 0.0]).with_time(0.75);
    write_dump(&w, &mut std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_dump(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.values(), w.values());
    assert_eq!((back.grid(), back.frame()), (w.grid(), Frame::Scaled));
    assert_relative_eq!(back.time(), 0.75);
}

#[test]
fn truncated_dump_is_rejected() {
    let mut bytes = Vec::new();
    write_dump(&combo(1.0, 0.0, 0.0, 0.0, [0.0, 0.0]), &mut bytes).unwrap();
    bytes.truncate(bytes.len() - 8);
    assert!(read_dump(bytes.as_slice()).is_err());
    assert!(read_dump(&b"not a field\n"[..]).is_err());
}
