//! Generalized pentagram map on twisted polygons in RP^n.
//!
//! Two independent pipelines compute the map: exact rational arithmetic on
//! the projective invariants (Cramer's rule on the moving-frame columns)
//! and floating-point geometry on lifted vertices (subspace intersection
//! plus renormalization). The exact pipeline carries the structural checks:
//! scaling invariance, determinant degree laws, the zero-curvature frames,
//! and conservation of the spectral invariants along orbits.

pub mod cyclic;
pub mod error;
pub mod geometry;
pub mod integrability;
pub mod invariants;
pub mod json;
pub mod linalg;
pub mod polygon;
pub mod sample;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::{ExactScalar, Scalar};
