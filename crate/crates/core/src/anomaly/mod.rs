//! Anomaly index of finite-depth symmetry actions: half-chain truncation,
//! boundary unitaries `V_{g,h}` and the 3-cocycle they define.

pub mod cocycle;
pub mod half_chain;
pub mod inner;
pub mod lsm;
pub mod models;

pub use cocycle::{anomaly_3cocycle, boundary_cocycle_data, AnomalyCocycle, BoundaryCocycleData, VDataJson};
pub use half_chain::{half_chain_restrict, half_chain_restrict_with_width, HalfChainAction};
pub use inner::{recover_inner_unitary, InnerUnitary};
pub use lsm::{assess_state, lsm_obstruction_report, LsmConditions, LsmProbes, LsmReport, LsmStatus};

use crate::cohomology::solver::is_coboundary;
use crate::error::Result;
use crate::symmetry::action::SymmetryAction;

/// Full pipeline for an action: truncate at `cut`, recover `V`, assemble `ω`.
pub fn anomaly_of(action: &SymmetryAction, cut: usize, extra: usize) -> Result<(BoundaryCocycleData, AnomalyCocycle)> {
    let half = half_chain_restrict(action, cut, extra)?;
    let data = boundary_cocycle_data(&half)?;
    let omega = anomaly_3cocycle(&data, None)?;
    Ok((data, omega))
}

/// Whether the anomaly class is trivial.
pub fn class_trivial(omega: &AnomalyCocycle) -> Result<bool> {
    Ok(is_coboundary(&omega.cocycle)?.is_some())
}
