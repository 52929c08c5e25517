//! Convection–pressure split flux-difference schemes for the compressible
//! Euler equations.
//!
//! The crate provides the Zha–Bilgen and Toro–Vázquez split upwind fluxes
//! (`ZbsFds`, `TvsFds`), the Jordan-form eigenstructure they rest on, an
//! exact Riemann solver used as a reference, one- and two-dimensional
//! finite-volume drivers and a catalogue of benchmark problems.
//!
//! Numerical routines are generic over [`Real`] (`f32` or `f64`); the type
//! aliases at the crate root fix the scalar to `f64`.

// `!(x > 0)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench1d;
pub mod eigen;
pub mod error;
pub mod euler2d;
pub mod fds;
pub mod linalg;
pub mod riemann;
pub mod scalar;
pub mod solver1d;
pub mod splitting;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use fds::SchemeKind;
pub use scalar::Real;
pub use splitting::SplittingKind;

pub type GasModelF64 = state::GasModel<f64>;
pub type PrimitiveState = state::Primitive<f64>;
pub type ConservedState = state::Conserved<f64>;
pub type Matrix3 = linalg::Matrix<f64, 3>;
pub type Vector3 = linalg::Vector<f64, 3>;
