//! Two-view epipolar geometry on combinatorial cubes.
//!
//! Images of the eight vertices of a combinatorial cube defeat the plain
//! 8-point algorithm: the constraint matrix has a two-dimensional kernel for
//! every pair of cameras. This crate detects that situation, recovers the
//! fundamental matrix anyway with the Cube-8-point algorithm, classifies the
//! quadric through the cube and both focal points, and checks the underlying
//! bracket identity in exact rational arithmetic.

pub mod degeneracy;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod harness;
pub mod linalg;
pub mod projective;
pub mod quadrics;
pub mod tolerance;

pub use error::{Error, Result};
pub use projective::{Camera, FMatrix, HomPoint2, HomPoint3};
pub use tolerance::Tolerances;
