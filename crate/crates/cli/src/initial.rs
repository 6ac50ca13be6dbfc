//! Initial data built from a named family.

use std::fs::File;

use oseen_core::fields::{read_dump, resample_to};
use oseen_core::random::{positive_perturbation, random_smooth};
use oseen_core::vortex::{dipole_modes, gaussian};
use oseen_core::{Frame, Grid2D, ScalarField};

use crate::config::{Family, InitialCondition};
use crate::error::{CliError, CliResult};

/// Random data must be negligible at the box edge.
pub const BOUNDARY_DECAY: f64 = 1e-12;

/// Samples the initial vorticity on `grid` in the scaled frame at `τ = 0`.
///
/// - `oseen`: `αG`
/// - `shifted-oseen`: `αG(ξ − a)`
/// - `dipole`: `αG + A (â·F)` with `â` the unit shift direction (`e₁` when the shift is zero)
/// - `random-smooth`: `αG(1 + Aφ)/mass` for `α ≠ 0`, otherwise a zero-mass field of peak `A`
/// - `file`: a field dump, resampled onto `grid` when the boxes differ
pub fn build_initial(ic: &InitialCondition, grid: &Grid2D, seed: u64) -> CliResult<ScalarField> {
    let a = ic.alpha;
    let w = match ic.family {
        Family::Oseen => ScalarField::from_fn(*grid, |x, y| a * gaussian(x, y)),
        Family::ShiftedOseen => {
            let [s1, s2] = ic.shift;
            ScalarField::from_fn(*grid, |x, y| a * gaussian(x - s1, y - s2))
        }
        Family::Dipole => {
            let norm = ic.shift[0].hypot(ic.shift[1]);
            let dir = if norm > 0.0 { [ic.shift[0] / norm, ic.shift[1] / norm] } else { [1.0, 0.0] };
            let amp = ic.amplitude;
            ScalarField::from_fn(*grid, |x, y| {
                let [f1, f2] = dipole_modes(x, y);
                a * gaussian(x, y) + amp * (dir[0] * f1 + dir[1] * f2)
            })
        }
        Family::RandomSmooth => {
            let w = if a != 0.0 {
                positive_perturbation(grid, seed, ic.corr_len, ic.amplitude, a)?
            } else {
                random_smooth(grid, seed, ic.corr_len, ic.amplitude)?
            };
            let ratio = w.boundary_ratio();
            if ratio > BOUNDARY_DECAY {
                return Err(CliError::Rejected(format!(
                    "random-smooth datum is {ratio:e} of its peak at the box edge (limit {BOUNDARY_DECAY:e}); enlarge the box"
                )));
            }
            w
        }
        Family::File => {
            let path = ic.path.as_ref().ok_or_else(|| CliError::Config("family file needs a path".into()))?;
            let w = read_dump(File::open(path)?)?;
            w.require_frame(Frame::Scaled)?;
            if w.grid() == grid {
                w
            } else {
                resample_to(&w, grid, 1.0)?.with_time(0.0)
            }
        }
    };
    w.ensure_finite()?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Experiment, ExperimentConfig};
    use oseen_core::fields::{moments, write_dump};

    fn ic(family: Family) -> InitialCondition {
        InitialCondition { family, ..ExperimentConfig::defaults(Experiment::Convergence).initial }
    }

    #[test]
    fn families_have_expected_moments() {
        let grid = Grid2D::new(64, 12.0).unwrap();
        let m = moments(&build_initial(&ic(Family::ShiftedOseen), &grid, 0).unwrap());
        assert!((m.alpha - 1.0).abs() < 1e-12 && (m.beta1 - 0.5).abs() < 1e-12 && m.beta2.abs() < 1e-12);
        let m = moments(&build_initial(&ic(Family::Dipole), &grid, 0).unwrap());
        assert!((m.alpha - 1.0).abs() < 1e-12 && (m.beta1 - 0.5).abs() < 1e-12);
        let w = build_initial(&ic(Family::RandomSmooth), &grid, 3).unwrap();
        assert!(w.min_value() > 0.0 && (moments(&w).alpha - 1.0).abs() < 1e-12);
        let zero = InitialCondition { alpha: 0.0, ..ic(Family::RandomSmooth) };
        assert!(moments(&build_initial(&zero, &grid, 3).unwrap()).alpha.abs() < 1e-12);
    }

    #[test]
    fn random_data_too_wide_for_the_box() {
        let grid = Grid2D::new(64, 5.0).unwrap();
        assert!(matches!(build_initial(&ic(Family::RandomSmooth), &grid, 3), Err(CliError::Rejected(_))));
    }

    #[test]
    fn file_family_resamples() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w0.field");
        let src = Grid2D::new(64, 12.0).unwrap();
        let w = ScalarField::from_fn(src, |x, y| gaussian(x - 0.3, y));
        write_dump(&w, &mut File::create(&path).unwrap()).unwrap();
        let desc = InitialCondition { path: Some(path), ..ic(Family::File) };
        assert_eq!(build_initial(&desc, &src, 0).unwrap().values(), w.values());
        let dst = Grid2D::new(128, 12.0).unwrap();
        let fine = build_initial(&desc, &dst, 0).unwrap();
        let exact = ScalarField::from_fn(dst, |x, y| gaussian(x - 0.3, y));
        let err = fine.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}
