//! States and operators on finite chains.

pub mod density;
pub mod geometry;
pub mod matrix_json;
pub mod operator;
pub mod states;

pub use density::{DensityOperator, PureStateVector};
pub use geometry::{dim_cap, ChainGeometry, Region};
pub use operator::LocalOperator;
pub use states::StateSpec;
