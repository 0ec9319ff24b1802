use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;

pub const CHARGED_TOL: f64 = 1e-10;

/// `(1/|G|) Σ_g α_g(op)`.
pub fn group_average(action: &SymmetryAction, op: &LocalOperator) -> Result<LocalOperator> {
    weighted_average(action, op, |_| C64::new(1.0, 0.0))
}

fn weighted_average(
    action: &SymmetryAction,
    op: &LocalOperator,
    weight: impl Fn(usize) -> C64,
) -> Result<LocalOperator> {
    let n = action.group().order();
    let mut acc: Option<LocalOperator> = None;
    for g in 0..n {
        let term = action.apply(g, op)?.scale(weight(g));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("groups are nonempty").scale(C64::new(1.0 / n as f64, 0.0)))
}

#[derive(Clone, Debug)]
pub struct ChargeInfo {
    pub charged: bool,
    /// Frobenius norm of the group average.
    pub trivial_norm: f64,
    pub op_norm: f64,
}

/// Charged means no weight on the trivial irrep: `‖Avg(op)‖ ≤ 1e-10 ‖op‖`.
pub fn is_charged(action: &SymmetryAction, op: &LocalOperator) -> Result<ChargeInfo> {
    let op_norm = op.norm();
    if op_norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let trivial_norm = group_average(action, op)?.norm();
    Ok(ChargeInfo { charged: trivial_norm <= CHARGED_TOL * op_norm, trivial_norm, op_norm })
}

#[derive(Clone, Debug)]
pub struct ChargeDecomposition {
    /// `(irrep label, component)`; the trivial irrep comes first.
    pub components: Vec<(String, LocalOperator)>,
    pub residual_norm: f64,
    /// False when only the trivial-versus-rest split was produced.
    pub complete: bool,
}

/// Split `op` by irreps. Abelian groups use all characters; otherwise only
/// the trivial part and its complement are separated.
pub fn charge_decompose(action: &SymmetryAction, op: &LocalOperator) -> Result<ChargeDecomposition> {
    let group = action.group();
    let mut components = Vec::new();
    let complete = group.is_abelian();
    if complete {
        for chi in group.characters() {
            let label = format!("[{}]", chi.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","));
            let comp = weighted_average(action, op, |g| chi[g].to_complex().conj())?;
            components.push((label, comp));
        }
    } else {
        let avg = group_average(action, op)?;
        let rest = op.padded(avg.support(), |s| action.geometry().local_dim(s))?.sub(&avg)?;
        components.push(("trivial".to_string(), avg));
        components.push(("nontrivial".to_string(), rest));
    }
    let mut sum = components[0].1.clone();
    for (_, c) in &components[1..] {
        sum = sum.add(c)?;
    }
    let residual_norm = sum.sub(op)?.norm();
    Ok(ChargeDecomposition { components, residual_norm, complete })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_is_charged_x_is_not() {
        let a = SymmetryAction::z2_flip(2).unwrap();
        let z = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
        let x = LocalOperator::pauli_string(&[(0, 'X')]).unwrap();
        let zz = LocalOperator::pauli_string(&[(0, 'Z'), (1, 'Z')]).unwrap();
        assert!(is_charged(&a, &z).unwrap().charged);
        assert!(!is_charged(&a, &x).unwrap().charged);
        assert!(!is_charged(&a, &zz).unwrap().charged);
        assert!(group_average(&a, &z).unwrap().is_zero(1e-15));
        assert!(is_charged(&a, &z.scale(C64::new(0.0, 0.0))).is_err());
    }

    #[test]
    fn decomposition_of_z_plus_x() {
        let a = SymmetryAction::z2_flip(1).unwrap();
        let z = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
        let x = LocalOperator::pauli_string(&[(0, 'X')]).unwrap();
        let d = charge_decompose(&a, &z.add(&x).unwrap()).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!(d.residual_norm < 1e-12);
        assert!(d.components[0].1.distance(&x).unwrap() < 1e-12);
        assert!(d.components[1].1.distance(&z).unwrap() < 1e-12);
    }
}
