//! Finite-volume RBF-WENO schemes for the one-dimensional Euler and
//! pressureless Euler equations.

pub mod config;
pub mod error;
pub mod grid;
pub mod harness;
pub mod hybrid;
pub mod norms;
pub mod physics;
pub mod problems;
pub mod rbf;
pub mod solver;
pub mod weno;
pub mod weno_js;

pub use error::{Error, Result};
