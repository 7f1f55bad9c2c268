//! Near-field / far-field transition analysis for antenna arrays.
//!
//! The crate computes the fields of coupling-free infinitesimal-dipole arrays,
//! measures how quickly they approach their far-field approximation along a
//! test line, and evaluates published single-number near–far-field boundary
//! formulas against that convergence.

pub mod boundaries;
pub mod error;
pub mod farfield;
pub mod grid;
pub mod harness;
pub mod metric;
pub mod sources;
pub mod wave;

pub use error::{Error, Result};
pub use wave::{CVec3, Direction, SphericalPoint, Vec3, WaveContext, Z0};
