//! Numerical toolkit for Finsler model geometries.
//!
//! The crate is organized around three layers:
//!
//! * norms and spaces — [`minkowski`] provides strongly convex norms on
//!   `R^n`, [`space`] the generic point-dependent metric machinery
//!   (Legendre transform, co-metric, geodesic spray, curvature), and
//!   [`berwald`] / [`funk`] the two projectively flat model spaces on
//!   convex domains together with their closed forms;
//! * measures and integration — [`quadrature`] is an adaptive
//!   Gauss–Kronrod engine with a compactifying substitution for improper
//!   integrals, [`special`] holds Gamma/Beta and the curvature scale
//!   function, [`measures`] the polar densities and radial measure models;
//! * analysis — [`functionals`] evaluates the Hardy, uncertainty and
//!   Caffarelli–Kohn–Nirenberg quotients on radial test functions, plus
//!   Sobolev seminorms with divergence detection.

pub mod ascent;
pub mod berwald;
pub mod diff;
pub mod error;
pub mod functionals;
pub mod funk;
pub mod measures;
pub mod minkowski;
pub mod quadrature;
pub mod quartic;
pub mod space;
pub mod special;
pub mod vecn;

pub use berwald::BerwaldSpace;
pub use error::FinslerError;
pub use functionals::{FunctionalParams, RadialSpaceView, RadialTestFunction};
pub use funk::FunkSpace;
pub use measures::RadialMeasureModel;
pub use minkowski::MinkowskiNorm;
pub use quadrature::QuadratureSpec;
pub use space::{Covec, FinslerSpace, TangentVec};

pub type Result<T> = std::result::Result<T, FinslerError>;
