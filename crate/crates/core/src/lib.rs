//! Numerical laboratory for entropy functionals and sumset-type entropy
//! inequalities of continuous and discrete distributions.

pub mod checks;
pub mod discrete;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod expr;
pub mod gaussian_network;
pub mod grid;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
