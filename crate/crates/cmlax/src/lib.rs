//! R-matrix valued Lax pairs for elliptic Calogero-Moser systems.
//!
//! The crate builds the Lax pairs for the root systems A, B, C, D and BC with
//! Baxter-Belavin, Yang and XXZ R-matrices, and checks the identities they
//! rely on numerically at seeded random points.

pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod laxpairs;
pub mod quantum;
pub mod report;
pub mod rmatrix;
pub mod sampling;
pub mod spin_tops;
pub mod suites;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
