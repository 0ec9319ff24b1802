//! Finite symmetry groups acting on chains.

pub mod action;
pub mod charge;
pub mod circuit;
pub mod defects;
pub mod spec;

pub use action::{RealizationKind, SymmetryAction};
pub use charge::{charge_decompose, group_average, is_charged, ChargeDecomposition};
pub use circuit::Circuit;
pub use defects::{strong_symmetry_defect_finite, weak_symmetry_defect};
pub use spec::SymmetrySpec;
