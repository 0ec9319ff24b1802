//! Consistency of a state's diagnostics with the strong-symmetry LSM
//! constraint: a clustering, strongly symmetric state obeying an area law
//! cannot carry a nontrivial anomaly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostics::coherence::charge_coherence_scan;
use crate::diagnostics::correlators::clustering_scan;
use crate::diagnostics::entropy::mutual_information;
use crate::diagnostics::report::{classify, Thresholds, Verdict, WindowSchedule};
use crate::error::Result;
use crate::spin::density::DensityOperator;
use crate::spin::geometry::Region;
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LsmStatus {
    /// The state does not cluster, so nothing is constrained.
    NotApplicable,
    NoObstruction,
    Consistent,
    /// All hypotheses hold together with a nontrivial anomaly. This
    /// contradicts the theorem and points at a defect in the toolkit.
    FailedConsistencyCheck,
    Inconclusive,
}

impl fmt::Display for LsmStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LsmStatus::NotApplicable => "NOT-APPLICABLE",
            LsmStatus::NoObstruction => "NO-OBSTRUCTION",
            LsmStatus::Consistent => "CONSISTENT",
            LsmStatus::FailedConsistencyCheck => "FAILED",
            LsmStatus::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// `Some(true)` / `Some(false)` for settled conditions, `None` when the
/// underlying scan was inconclusive.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LsmConditions {
    pub clustering: Option<bool>,
    pub strong_symmetry: Option<bool>,
    pub area_law: Option<bool>,
    pub anomaly_trivial: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LsmReport {
    pub conditions: LsmConditions,
    pub status: LsmStatus,
    pub notes: Vec<String>,
}

pub fn lsm_obstruction_report(conditions: LsmConditions) -> LsmReport {
    let mut notes = Vec::new();
    let status = match conditions.clustering {
        None => {
            notes.push("clustering scan inconclusive".into());
            LsmStatus::Inconclusive
        }
        Some(false) => LsmStatus::NotApplicable,
        Some(true) if conditions.anomaly_trivial => LsmStatus::NoObstruction,
        Some(true) => match (conditions.strong_symmetry, conditions.area_law) {
            (Some(true), Some(true)) => {
                notes.push("clustering, strongly symmetric, area-law state with a nontrivial anomaly".into());
                LsmStatus::FailedConsistencyCheck
            }
            (Some(false), _) | (_, Some(false)) => LsmStatus::Consistent,
            _ => {
                notes.push("strong-symmetry or area-law scan inconclusive".into());
                LsmStatus::Inconclusive
            }
        },
    };
    LsmReport { conditions, status, notes }
}

fn settled(v: Verdict, holds_when: Verdict) -> Option<bool> {
    match v {
        Verdict::Inconclusive => None,
        v => Some(v == holds_when),
    }
}

/// Probes needed to assess a state.
#[derive(Clone, Debug)]
pub struct LsmProbes<'a> {
    /// Charged operator used for clustering and charge coherence.
    pub probe: &'a LocalOperator,
    pub distances: &'a [usize],
    pub schedule: &'a WindowSchedule,
}

/// Run the three state diagnostics and assemble the report.
///
/// Area law: mutual information across the cut `[0, ℓ) | [ℓ, N)` for
/// `ℓ = 1..N/2` saturates (a settled verdict of the sequence).
pub fn assess_state(
    rho: &DensityOperator,
    action: &SymmetryAction,
    probes: LsmProbes<'_>,
    anomaly_trivial: bool,
    thresholds: Thresholds,
) -> Result<LsmReport> {
    let cl = clustering_scan(rho, probes.probe, probes.probe, probes.distances, thresholds)?;
    let co = charge_coherence_scan(rho, probes.probe, probes.schedule, Some(action), thresholds)?;
    let n = rho.geometry().num_sites();
    let mi = (1..=n / 2)
        .map(|l| mutual_information(rho, &Region::interval(0, l)).map(|m| m.value()))
        .collect::<Result<Vec<_>>>()?;
    let area = match classify(&mi, &thresholds) {
        Verdict::Inconclusive => None,
        _ => Some(true),
    };
    let mut report = lsm_obstruction_report(LsmConditions {
        clustering: settled(cl.verdict, Verdict::Vanishing),
        strong_symmetry: settled(co.verdict, Verdict::Vanishing),
        area_law: area,
        anomaly_trivial,
    });
    report.notes.push(format!("mutual information by cut: {mi:?}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::states;

    #[test]
    fn decision_order() {
        let base = LsmConditions {
            clustering: Some(true),
            strong_symmetry: Some(true),
            area_law: Some(true),
            anomaly_trivial: true,
        };
        assert_eq!(lsm_obstruction_report(base.clone()).status, LsmStatus::NoObstruction);
        let bad = LsmConditions { anomaly_trivial: false, ..base.clone() };
        assert_eq!(lsm_obstruction_report(bad).status, LsmStatus::FailedConsistencyCheck);
        let weak = LsmConditions { anomaly_trivial: false, strong_symmetry: Some(false), ..base.clone() };
        assert_eq!(lsm_obstruction_report(weak).status, LsmStatus::Consistent);
        let lro = LsmConditions { clustering: Some(false), anomaly_trivial: false, ..base };
        assert_eq!(lsm_obstruction_report(lro).status, LsmStatus::NotApplicable);
    }

    #[test]
    fn product_and_ghz() {
        let n = 6;
        let a = SymmetryAction::z2_flip(n).unwrap();
        let z = LocalOperator::pauli_string(&[(1, 'Z')]).unwrap();
        let sched = WindowSchedule::centered_widths(n, 2, &[3, 5]).unwrap();
        let probes = LsmProbes { probe: &z, distances: &[2, 3, 4], schedule: &sched };
        let plus =
            assess_state(&states::plus_product(n).unwrap(), &a, probes.clone(), true, Thresholds::default()).unwrap();
        assert_eq!(plus.status, LsmStatus::NoObstruction);
        let ghz = assess_state(&states::ghz_mixture(n).unwrap(), &a, probes, true, Thresholds::default()).unwrap();
        assert_eq!(ghz.status, LsmStatus::NotApplicable);
    }
}
