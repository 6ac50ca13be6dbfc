//! Self-similar 2D vorticity dynamics around the Oseen vortex.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biot_savart;
pub mod error;
pub mod evolution;
pub mod fields;
pub mod lyapunov;
pub mod random;
pub mod spectrum;
pub mod vortex;

pub use error::{Error, Result};
pub use fields::{Frame, Grid2D, MomentSet, ScalarField, VectorField, Warning};
