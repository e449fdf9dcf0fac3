//! Teneva Game workbench.
//!
//! Computes lower-half sequences and color bounds for the torus knots
//! `T(2, p)`, constructs colored diagrams realizing those bounds through
//! colored Reidemeister moves, and certifies minimum-color results with
//! Fox-coloring linear algebra over prime moduli.

pub mod certify;
pub mod coloring;
pub mod diagram;
pub mod engine;
pub mod error;
pub mod k1;
pub mod linalg;
pub mod lower_halves;
pub mod morse;
pub mod planar;
pub mod primes;
pub mod script;

pub use error::{Error, Result};
