//! Exact finite-chain diagnostics for strong and weak symmetries of mixed
//! states, finite-group cohomology with U(1) coefficients, anomaly indices of
//! finite-depth symmetry actions, and Stinespring-form bath evolutions.
//!
//! Basis labels are little-endian: site 0 is the fastest index.

pub mod anomaly;
pub mod channels;
pub mod cohomology;
pub mod diagnostics;
pub mod error;
pub mod group;
pub mod linalg;
pub mod phase;
pub mod random;
pub mod scenario;
pub mod spin;
pub mod symmetry;

pub use error::{Error, Result};
