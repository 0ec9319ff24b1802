//! Cochains of finite groups with `Q/Z ⊂ U(1)` coefficients and trivial action.

pub mod cochain;
pub mod json;
pub mod projective;
pub mod solver;

pub use cochain::{coboundary, is_cocycle, Cochain};
pub use json::CocycleJson;
pub use projective::projective_2cocycle;
pub use solver::{is_coboundary, same_class, CoboundarySolver};
