use std::sync::{Arc, OnceLock};

use oseen_core::spectrum::{
    assemble_operator, eigen_spectrum, eigenvalue_bound, generic_profile, semigroup_decay, ModeForms, RadialGrid,
    Subspace, TRUST_TOLERANCE,
};
use proptest::prelude::*;

fn grid() -> Arc<RadialGrid> {
    static GRID: OnceLock<Arc<RadialGrid>> = OnceLock::new();
    GRID.get_or_init(|| Arc::new(RadialGrid::for_basis(48).unwrap())).clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn forms_are_symmetric_and_skew(n in -5i32..=5) {
        let forms = ModeForms::new(n, 48, grid()).unwrap();
        prop_assert!(forms.symmetry_defect() < 1e-8);
        prop_assert!(forms.skew_defect() < 1e-6);
        prop_assert!(forms.l_upper_bound().unwrap() <= -(n.abs() as f64) / 2.0 + 1e-8);
    }

    #[test]
    fn trusted_eigenvalues_respect_the_bounds(n in -3i32..=3, alpha in 0.0..60.0f64) {
        let op = assemble_operator(n, alpha, &grid()).unwrap();
        for sub in [Subspace::ZeroMean, Subspace::MomentFree] {
            let r = eigen_spectrum(&op, sub).unwrap();
            let (bound, _) = eigenvalue_bound(sub, alpha, 4.0).unwrap();
            for l in r.trusted_eigenvalues() {
                prop_assert!(l.re <= bound + TRUST_TOLERANCE, "n={n} alpha={alpha} {l}");
            }
        }
    }

    #[test]
    fn spectrum_is_conjugate_under_n_to_minus_n(n in 1i32..=3, alpha in 0.5..20.0f64) {
        let a = eigen_spectrum(&assemble_operator(n, alpha, &grid()).unwrap(), Subspace::Full).unwrap();
        let b = eigen_spectrum(&assemble_operator(-n, alpha, &grid()).unwrap(), Subspace::Full).unwrap();
        for l in a.trusted_eigenvalues().take(4) {
            let d = b.trusted_eigenvalues().map(|m| (m - l.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-6, "{l}");
        }
    }

    #[test]
    fn semigroup_decays_on_the_moment_free_subspace(n in 0i32..=3, alpha in 0.0..10.0f64, seed in 0u64..1000) {
        let op = assemble_operator(n, alpha, &grid()).unwrap();
        let r0 = generic_profile(&op.forms, Subspace::MomentFree, seed).unwrap();
        let d = semigroup_decay(&op, &r0, Subspace::MomentFree, 1.0, 12.0, 1e-3).unwrap();
        prop_assert!(d.passed(), "rate {}", d.rate);
        prop_assert!(d.norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }
}
