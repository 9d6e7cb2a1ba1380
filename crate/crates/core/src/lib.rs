//! Numerical toolkit for the spatially homogeneous non-cutoff Boltzmann
//! collision operator: σ-representation, Carleman split, and weak form of
//! the operator; the kinetic Lie-group geometry and its Hölder seminorms;
//! the anisotropic large-velocity change of variables; sweep-based
//! verification of the quantitative kernel estimates the operator satisfies;
//! and barrier/decay machinery wired into a coarse-grid time stepper.
//!
//! All numerics are generic over the scalar type (`f32`/`f64`) through
//! [`scalar::Real`]; concrete `f64` aliases live at the crate root.

pub mod barrier;
pub mod collision;
pub mod config;
pub mod cov;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod minimize;
pub mod model;
pub mod quad;
pub mod scalar;
pub mod solver;
pub mod verifier;
pub mod vec3;

pub use error::{Error, Result};
pub use scalar::Real;

/// Concrete working-precision aliases.
pub type V3 = vec3::Vec3<f64>;
pub type M3 = vec3::Mat3<f64>;
pub type Params = model::ModelParams<f64>;
pub type Density = model::DensityFunction<f64>;
