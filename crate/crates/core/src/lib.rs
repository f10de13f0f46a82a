//! Numerical steepest descent for oscillatory integrals whose phase behaves
//! like `|x - x0|^alpha` at a special point.
//!
//! The special point is removed by an n-spherical change of variables around
//! it; the radial integral is then deformed onto steepest-descent paths in the
//! complex plane and resolved with Gaussian rules for `x^d exp(-x^alpha)`,
//! while the remaining angular integral is non-oscillatory and handled by a
//! classical rule.

pub mod duct;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod path;
pub mod polar;
pub mod rules;
pub mod specfun;
pub mod univariate;

pub use error::{Error, Result};
pub use num_complex::Complex64;
