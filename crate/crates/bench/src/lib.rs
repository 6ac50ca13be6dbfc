//! Inputs shared by the benchmarks.

use oseen_core::random::positive_perturbation;
use oseen_core::vortex::gaussian;

pub use oseen_core::{Grid2D, ScalarField};

/// Shifted Oseen vortex `G(ξ − (0.5, 0))` on an `n × n` grid of half width 12.
pub fn shifted_vortex(n: usize) -> ScalarField {
    let grid = Grid2D::new(n, 12.0).expect("benchmark grid sizes are powers of two");
    ScalarField::from_fn(grid, |x, y| gaussian(x - 0.5, y))
}

/// Positive random perturbation of `G` with unit mass.
pub fn perturbed_vortex(n: usize, seed: u64) -> ScalarField {
    let grid = Grid2D::new(n, 12.0).expect("benchmark grid sizes are powers of two");
    positive_perturbation(&grid, seed, 1.0, 0.5, 1.0).expect("valid perturbation parameters")
}
