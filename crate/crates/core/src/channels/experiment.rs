//! Strongly symmetric channels keep the joint state strongly symmetric, yet
//! the traced output can lose charge coherence on every proper window.

use serde::Serialize;

use crate::channels::channel::{apply_channel, is_strongly_symmetric_channel, BathState, Channel, STRONG_TOL};
use crate::diagnostics::coherence::charge_coherence_scan;
use crate::diagnostics::extension::{extension_symmetry_defect, extension_symmetry_defect_pure};
use crate::diagnostics::report::{DiagnosticReport, Thresholds, WindowSchedule};
use crate::error::{Error, Result};
use crate::linalg;
use crate::spin::density::{DensityOperator, PureStateVector};
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::defects::{strong_defect_matrices, strong_symmetry_defect_finite};

#[derive(Clone, Debug, Serialize)]
pub struct IrreversibilityReport {
    /// Strong defect of the input, maximized over generators.
    pub input_strong_defect: f64,
    pub channel_defect: f64,
    /// (i) strong defect of `W(ρ⊗Φ_B)W†` under `U_g ⊗ 𝕀_B`.
    pub joint_strong_defect: f64,
    /// (ii) charge coherence of the traced output.
    pub coherence: DiagnosticReport,
    /// (iii) extension defect per window: the joint state extends the
    /// output's restriction to the window, and the symmetry acts on the
    /// window sites only.
    pub extension: DiagnosticReport,
    /// The same with the symmetry on the whole system.
    pub extension_full_chain: f64,
    pub notes: Vec<String>,
}

fn as_pure(rho: &DensityOperator) -> Result<Option<PureStateVector>> {
    if (rho.purity() - 1.0).abs() > 1e-12 {
        return Ok(None);
    }
    let (vals, vecs) = linalg::eigh(rho.matrix());
    let v = vecs.column(vals.len() - 1).into_owned();
    Ok(Some(PureStateVector::normalize(rho.geometry().clone(), v)?))
}

enum Joint {
    Pure(PureStateVector),
    Mixed(DensityOperator),
}

impl Joint {
    fn extension_defect(
        &self,
        system: &crate::spin::geometry::Region,
        target: &DensityOperator,
        action: &SymmetryAction,
        g: usize,
    ) -> Result<f64> {
        Ok(match self {
            Joint::Pure(p) => extension_symmetry_defect_pure(p, system, Some(target), action, g)?.value,
            Joint::Mixed(m) => extension_symmetry_defect(m, system, Some(target), action, g)?.value,
        })
    }
}

/// Runs the three legs for `ρ_initial` through `ch`. `probe` must be charged
/// and contained in every window of `schedule`; the extension leg uses the
/// same windows and needs an on-site action.
pub fn irreversibility_experiment(
    rho_initial: &DensityOperator,
    ch: &Channel,
    action: &SymmetryAction,
    probe: &LocalOperator,
    schedule: &WindowSchedule,
    thresholds: Thresholds,
) -> Result<IrreversibilityReport> {
    let gens = action.generators();
    let check = is_strongly_symmetric_channel(ch, action)?;
    if !check.symmetric {
        return Err(Error::Precondition(format!("channel is not strongly symmetric (defect {:e})", check.defect)));
    }
    let mut input_strong_defect: f64 = 0.0;
    for &g in &gens {
        input_strong_defect = input_strong_defect.max(strong_symmetry_defect_finite(rho_initial, action, g)?);
    }
    if input_strong_defect > STRONG_TOL {
        return Err(Error::Precondition(format!(
            "input is not strongly symmetric at finite size (defect {input_strong_defect:e})"
        )));
    }

    let joint_rho = ch.joint_state(rho_initial)?;
    let jg = ch.joint_geometry();
    let mut joint_strong_defect: f64 = 0.0;
    for &g in &gens {
        let u_rho = action.circuit_of(g).apply_left(jg, joint_rho.matrix())?;
        joint_strong_defect = joint_strong_defect.max(strong_defect_matrices(joint_rho.matrix(), &u_rho));
    }

    let out = apply_channel(ch, rho_initial)?;
    let coherence = charge_coherence_scan(&out, probe, schedule, Some(action), thresholds)?;

    let joint = match (as_pure(rho_initial)?, ch.bath()) {
        (Some(psi), BathState::Pure(_)) => Joint::Pure(ch.joint_pure(&psi)?),
        _ => Joint::Mixed(joint_rho),
    };
    let system = ch.system_region();
    let mut extension_full_chain: f64 = 0.0;
    for &g in &gens {
        extension_full_chain = extension_full_chain.max(joint.extension_defect(&system, &out, action, g)?);
    }
    let mut notes = Vec::new();
    let mut values = Vec::new();
    if action.is_on_site() {
        for w in schedule.windows() {
            let local = action.restricted_on_site(w)?;
            let target = out.restrict(w)?;
            let mut worst: f64 = 0.0;
            for &g in &gens {
                worst = worst.max(joint.extension_defect(w, &target, &local, g)?);
            }
            values.push(worst);
        }
    } else {
        notes.push(
            "window-local extension defects need an on-site action; only the full-chain value is reported".into(),
        );
    }
    let widths = if values.is_empty() { Vec::new() } else { schedule.widths() };
    let extension = DiagnosticReport::new("extension_symmetry_defect", "window", widths, values, thresholds)
        .with_convention("extension", "joint system-bath state after the channel")
        .with_convention("symmetry", "generators acting on the window sites only");
    Ok(IrreversibilityReport {
        input_strong_defect,
        channel_defect: check.defect,
        joint_strong_defect,
        coherence,
        extension,
        extension_full_chain,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::cluster::{cluster_dephasing_channel, cluster_dephasing_channel_with, ClusterBath};
    use crate::diagnostics::report::Verdict;
    use crate::spin::geometry::ChainGeometry;
    use crate::spin::states;

    #[test]
    fn cluster_channel_loses_local_coherence() {
        let n = 4;
        let a = SymmetryAction::z2_flip(n).unwrap();
        let z = LocalOperator::pauli_string(&[(1, 'Z')]).unwrap();
        let sched = WindowSchedule::centered_widths(n, 1, &[1, 2, 3]).unwrap();
        let r = irreversibility_experiment(
            &states::plus_product(n).unwrap(),
            &cluster_dephasing_channel(n).unwrap(),
            &a,
            &z,
            &sched,
            Thresholds::default(),
        )
        .unwrap();
        assert!(r.joint_strong_defect < 1e-12);
        assert_eq!(r.coherence.verdict, Verdict::Persistent);
        assert!(r.coherence.values.iter().all(|v| (v - 1.0).abs() < 1e-10));
        assert!(r.extension.values.iter().all(|v| (v - 1.0).abs() < 1e-10));
        assert!(r.extension_full_chain < 1e-12);
    }

    #[test]
    fn identity_channel_changes_nothing() {
        let n = 4;
        let a = SymmetryAction::z2_flip(n).unwrap();
        let z = LocalOperator::pauli_string(&[(1, 'Z')]).unwrap();
        let sched = WindowSchedule::centered_widths(n, 1, &[1, 2, 3]).unwrap();
        let ch = Channel::identity(ChainGeometry::qubits(n).unwrap()).unwrap();
        let r =
            irreversibility_experiment(&states::plus_product(n).unwrap(), &ch, &a, &z, &sched, Thresholds::default())
                .unwrap();
        assert!(r.joint_strong_defect < 1e-12);
        assert_eq!(r.coherence.verdict, Verdict::Vanishing);
        assert!(r.extension.values.iter().all(|v| v.abs() < 1e-10));
        // parity-projected input stays as it was
        let rho2 = states::parity_projected(n).unwrap();
        let r2 = irreversibility_experiment(&rho2, &ch, &a, &z, &sched, Thresholds::default()).unwrap();
        assert_eq!(r2.coherence.verdict, Verdict::Persistent);
        assert!(r2.joint_strong_defect < 1e-12);
    }

    #[test]
    fn preconditions_are_enforced() {
        let n = 3;
        let a = SymmetryAction::z2_flip(n).unwrap();
        let z = LocalOperator::pauli_string(&[(1, 'Z')]).unwrap();
        let sched = WindowSchedule::centered_widths(n, 1, &[1, 2]).unwrap();
        let open = cluster_dephasing_channel_with(n, ClusterBath::Open).unwrap();
        let plus = states::plus_product(n).unwrap();
        assert!(matches!(
            irreversibility_experiment(&plus, &open, &a, &z, &sched, Thresholds::default()),
            Err(Error::Precondition(_))
        ));
        let mixed = states::maximally_mixed(n).unwrap();
        let ring = cluster_dephasing_channel(n).unwrap();
        assert!(matches!(
            irreversibility_experiment(&mixed, &ring, &a, &z, &sched, Thresholds::default()),
            Err(Error::Precondition(_))
        ));
    }
}
