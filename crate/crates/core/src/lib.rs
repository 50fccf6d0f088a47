//! Functional calculus for pairs and triples of noncommuting matrices,
//! Littlewood–Paley/Besov norms of trigonometric polynomials, Schatten-norm
//! machinery, and an extremal-search harness for Schatten–Lipschitz ratios.

pub mod besov;
pub mod error;
pub mod extremal;
pub mod funcalc;
pub mod opcore;

pub use error::{Error, Result};
