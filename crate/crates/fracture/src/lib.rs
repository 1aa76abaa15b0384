//! Two-dimensional brittle fracture toolkit: a shared P1 finite-element
//! core driving both a hybrid phase-field solver and a shape-optimization
//! (projected shape-gradient descent) solver for quasi-static crack
//! propagation in isotropic and anisotropic linear elasticity.

pub mod error;
pub mod fem;
pub mod material;
pub mod mesh;
pub mod meshgen;

pub use error::{Error, Result};
