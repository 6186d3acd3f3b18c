//! Anisotropic Littlewood-Paley analysis and a rotating, anisotropically
//! viscous incompressible flow solver on the periodic box `[0, 2π)³`.
//!
//! The crate provides, bottom to top:
//!
//! * spectral fields and unitary-normalized transforms ([`transform`]);
//! * a smooth dyadic filter bank with isotropic and vertical-frequency
//!   blocks, low-pass operators and frequency localization in `(x2, x3)`
//!   ([`filter`]);
//! * spectral calculus: derivatives, horizontal Laplacian, divergence and
//!   the Leray projection ([`calculus`]);
//! * anisotropic Sobolev / Lebesgue norms and inner products ([`norms`]);
//! * Bony paraproduct decompositions and dyadic commutators
//!   ([`paraproduct`]);
//! * seeded random field ensembles and an empirical certification harness
//!   for the functional inequalities the solver analysis relies on
//!   ([`ensemble`], [`inequality`]);
//! * the rotating flow solver with exact pointwise rotation, exact spectral
//!   diffusion and a midpoint integrating-factor step ([`solver`]);
//! * scripted experiments over the solver ([`experiments`]);
//! * a binary snapshot format for spectral fields ([`snapshot`]).
//!
//! All numerics are generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); the `*64` aliases below pin the double-precision
//! instantiation used by the command-line driver and the test suite.

pub mod calculus;
pub mod dealias;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod field;
pub mod filter;
pub mod flows;
pub mod grid;
pub mod inequality;
pub mod norms;
pub mod paraproduct;
pub mod rotation;
pub mod scalar;
pub mod snapshot;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use field::{SpectralField, VectorField};
pub use grid::Grid;
pub use scalar::Scalar;

/// Double-precision aliases for the main types.
pub type SpectralField64 = field::SpectralField<f64>;
pub type VectorField64 = field::VectorField<f64>;
pub type FilterBank64 = filter::FilterBank<f64>;
pub type RunResult64 = solver::RunResult<f64>;
