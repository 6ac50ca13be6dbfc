//! Spectrum of the linearization `ℒ − αΛ` at the Oseen vortex, one azimuthal mode at a time.
//!
//! Each mode is expanded in Laguerre functions `r^{|n|} e^{−r²/4} L_j^{(|n|)}(r²/4)`, which are
//! orthonormal in the Gaussian-weighted space `X`. Matrix entries are computed by composite
//! Gauss–Legendre quadrature on a radial grid.

mod basis;
mod eigen;
mod expm;
mod operator;
mod profile;
mod quadrature;

pub use basis::ModeBasis;
pub use eigen::{
    eigen_spectrum, eigenfunction_decay_check, eigenvalue_bound, fine_resolution, generic_profile, semigroup_decay,
    spectrum_sweep, verify_bounds, write_spectrum_csv, BoundsReport, MaxReal, SemigroupDecay, SpectrumResult,
    Subspace, TailFit, Violation, DEFAULT_RESOLUTIONS, TAIL_WINDOW, TRUST_TOLERANCE,
};
pub use expm::expm;
pub use operator::{assemble_operator, ModeForms, OperatorMatrix};
pub use profile::{angular_velocity, apply_lambda, mode_decompose, radial_gaussian, stream_omega, RadialProfile};
pub use quadrature::RadialGrid;
