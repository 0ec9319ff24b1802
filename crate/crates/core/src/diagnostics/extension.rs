use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::density::{trace_distance_matrices, DensityOperator, PureStateVector};
use crate::spin::geometry::Region;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::circuit::Circuit;

pub const RESTRICTION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExtensionDefect {
    /// `½‖ψ′ − (U_g⊗1) ψ′ (U_g⊗1)†‖₁`.
    pub value: f64,
    /// Trace distance between the joint's restriction and the target, when
    /// a target was supplied.
    pub restriction_mismatch: Option<f64>,
}

fn system_circuit(action: &SymmetryAction, system: &Region, g: usize, joint_dims: &[usize]) -> Result<Circuit> {
    if system.len() != action.geometry().num_sites() {
        return Err(Error::DimensionMismatch(format!(
            "action on {} sites, system region has {}",
            action.geometry().num_sites(),
            system.len()
        )));
    }
    for (k, &s) in system.sites().iter().enumerate() {
        if s >= joint_dims.len() || joint_dims[s] != action.geometry().local_dim(k) {
            return Err(Error::DimensionMismatch(format!("system site {s} does not match action site {k}")));
        }
    }
    let sites = system.sites().to_vec();
    action.embedded_circuit(g, move |s| sites[s])
}

fn check_restriction(restricted: &DensityOperator, target: Option<&DensityOperator>) -> Result<Option<f64>> {
    let Some(t) = target else {
        return Ok(None);
    };
    let mismatch = trace_distance_matrices(restricted.matrix(), t.matrix());
    if restricted.geometry().local_dims() != t.geometry().local_dims() || mismatch > RESTRICTION_TOL {
        return Err(Error::RestrictionMismatch(mismatch));
    }
    Ok(Some(mismatch))
}

/// Defect of a mixed extension. Any strictly positive value witnesses that
/// the target lacks strong symmetry under `g`.
pub fn extension_symmetry_defect(
    joint: &DensityOperator,
    system: &Region,
    target: Option<&DensityOperator>,
    action: &SymmetryAction,
    g: usize,
) -> Result<ExtensionDefect> {
    let restriction_mismatch = check_restriction(&joint.restrict(system)?, target)?;
    let c = system_circuit(action, system, g, joint.geometry().local_dims())?;
    let rotated = c.conjugate_matrix(joint.geometry(), joint.matrix())?;
    Ok(ExtensionDefect { value: trace_distance_matrices(joint.matrix(), &rotated), restriction_mismatch })
}

/// Pure extension: the trace distance is `√(1 − |⟨ψ|U_g⊗1|ψ⟩|²)`.
pub fn extension_symmetry_defect_pure(
    joint: &PureStateVector,
    system: &Region,
    target: Option<&DensityOperator>,
    action: &SymmetryAction,
    g: usize,
) -> Result<ExtensionDefect> {
    let restriction_mismatch = check_restriction(&joint.restrict(system)?, target)?;
    let c = system_circuit(action, system, g, joint.geometry().local_dims())?;
    let moved = c.apply_to_vector(joint.geometry(), joint.amplitudes())?;
    let ov = joint.amplitudes().dotc(&moved);
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { crate::linalg::ONE };
    // 1 − |ov|² = (δ/2)(2 − δ/2) with δ = ‖Uψ − e^{iθ}ψ‖², stable near zero
    let delta = (moved - joint.amplitudes() * phase).norm_squared();
    let value = (0.5 * delta * (2.0 - 0.5 * delta)).max(0.0).sqrt();
    Ok(ExtensionDefect { value, restriction_mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::purification::{canonical_purification, original_region};
    use crate::spin::states;

    #[test]
    fn product_purification_is_invariant() {
        let plus = states::plus_product(3).unwrap();
        let psi = canonical_purification(&plus).unwrap();
        let a = SymmetryAction::z2_flip(3).unwrap();
        let d = extension_symmetry_defect_pure(&psi, &original_region(3), Some(&plus), &a, 1).unwrap();
        assert!(d.value < 1e-12);
        let mixed = extension_symmetry_defect(&psi.to_density(), &original_region(3), Some(&plus), &a, 1).unwrap();
        assert!(mixed.value < 1e-12);
    }

    #[test]
    fn mixed_state_purification_is_not() {
        let r1 = states::maximally_mixed(2).unwrap();
        let psi = canonical_purification(&r1).unwrap();
        let a = SymmetryAction::z2_flip(2).unwrap();
        let d = extension_symmetry_defect_pure(&psi, &original_region(2), Some(&r1), &a, 1).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
        let wrong = states::plus_product(2).unwrap();
        assert!(matches!(
            extension_symmetry_defect_pure(&psi, &original_region(2), Some(&wrong), &a, 1),
            Err(Error::RestrictionMismatch(_))
        ));
    }
}
