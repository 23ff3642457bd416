//! Numerical state integrals for shaped triangulations.
//!
//! The crate evaluates Faddeev's quantum dilogarithm and the hyperbolic gamma
//! function, builds Boltzmann weights of shaped tetrahedra, integrates gauge-fixed
//! state integrals, and checks the integral identities (pentagons, beta integrals,
//! Bailey pairs) that make the partition function a topological invariant.

pub mod complexes;
pub mod error;
pub mod geometry;
pub mod identities;
pub mod integrate;
pub mod special_fn;
pub mod tqft;

pub use error::{Error, Result};
pub use num_complex::Complex64;
