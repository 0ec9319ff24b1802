use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::spin::density::{trace_distance_matrices, DensityOperator};
use crate::symmetry::action::SymmetryAction;

fn check_geometry(rho: &DensityOperator, action: &SymmetryAction) -> Result<()> {
    if rho.geometry().local_dims() != action.geometry().local_dims() {
        return Err(Error::DimensionMismatch(format!(
            "state on {:?}, action on {:?}",
            rho.geometry().local_dims(),
            action.geometry().local_dims()
        )));
    }
    Ok(())
}

/// `½‖ρ − U_g ρ U_g†‖₁`.
pub fn weak_symmetry_defect(rho: &DensityOperator, action: &SymmetryAction, g: usize) -> Result<f64> {
    check_geometry(rho, action)?;
    let rotated = action.conjugate_matrix(g, rho.matrix())?;
    Ok(trace_distance_matrices(rho.matrix(), &rotated))
}

/// `min_θ ‖U_g ρ − e^{iθ} ρ‖_F / ‖ρ‖_F`, minimized in closed form.
pub fn strong_symmetry_defect_finite(rho: &DensityOperator, action: &SymmetryAction, g: usize) -> Result<f64> {
    check_geometry(rho, action)?;
    let u_rho = action.apply_left(g, rho.matrix())?;
    Ok(strong_defect_matrices(rho.matrix(), &u_rho))
}

/// Same quantity from `ρ` and a precomputed `Uρ`.
pub fn strong_defect_matrices(rho: &CMatrix, u_rho: &CMatrix) -> f64 {
    let norm2: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return 0.0;
    }
    // optimal phase θ* = arg tr(ρ† Uρ); the residual is evaluated directly
    // rather than through 2 − 2|tr|, which loses half the digits near zero
    let overlap = rho.iter().zip(u_rho.iter()).map(|(a, b)| a.conj() * b).sum::<linalg::C64>();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { linalg::ONE };
    let resid: f64 = rho.iter().zip(u_rho.iter()).map(|(a, b)| (b - phase * a).norm_sqr()).sum();
    (resid / norm2).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::states;

    #[test]
    fn example_states() {
        let a = SymmetryAction::z2_flip(4).unwrap();
        let r1 = states::maximally_mixed(4).unwrap();
        let r2 = states::parity_projected(4).unwrap();
        let plus = states::plus_product(4).unwrap();
        assert!(weak_symmetry_defect(&r1, &a, 1).unwrap() < 1e-14);
        assert!(strong_symmetry_defect_finite(&r2, &a, 1).unwrap() < 1e-14);
        assert!(strong_symmetry_defect_finite(&plus, &a, 1).unwrap() < 1e-14);
        assert!((strong_symmetry_defect_finite(&r1, &a, 1).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let zero = states::basis(&[2; 4], &[0; 4]).unwrap();
        assert!((weak_symmetry_defect(&zero, &a, 1).unwrap() - 1.0).abs() < 1e-12);
    }
}
