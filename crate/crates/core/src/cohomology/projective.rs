use crate::cohomology::cochain::{is_cocycle, Cochain};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{self, CMatrix, C64};
use crate::phase::Phase;

pub const SNAP_TOL: f64 = 1e-6;
pub const SCALAR_TOL: f64 = 1e-9;

/// Default denominator bound for snapped 2-cocycle phases.
pub fn default_bound(group: &GroupTable) -> u64 {
    4 * (group.order() as u64).pow(2)
}

/// Scalar `c` with `m ≈ c·𝕀`, and the largest deviation from it.
pub fn scalar_part(m: &CMatrix) -> (C64, f64) {
    let d = m.nrows();
    let c = linalg::trace(m) / C64::from(d as f64);
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { c } else { linalg::ZERO };
            dev = dev.max((m[(i, j)] - target).norm());
        }
    }
    (c, dev)
}

/// 2-cocycle of a projective representation, `ρ(g)ρ(h) = e^{2πiω(g,h)} ρ(gh)`.
///
/// `ρ(e)` is rescaled to `𝕀` first, so the result is normalized.
pub fn projective_2cocycle(group: &GroupTable, matrices: &[CMatrix], bound: Option<u64>) -> Result<Cochain> {
    let n = group.order();
    if matrices.len() != n {
        return Err(Error::DimensionMismatch(format!("{} matrices for a group of order {n}", matrices.len())));
    }
    let d = matrices[0].nrows();
    for m in matrices {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch("matrices of unequal size".into()));
        }
        let defect = linalg::unitarity_defect(m);
        if defect > 1e-9 {
            return Err(Error::NotUnitary(defect));
        }
    }
    let (c_e, dev) = scalar_part(&matrices[group.identity()]);
    if dev > SCALAR_TOL {
        return Err(Error::NotProjective(dev));
    }
    let fix = c_e.conj() / C64::from(c_e.norm());
    let rho: Vec<CMatrix> = matrices.iter().map(|m| m * fix).collect();
    let bound = bound.unwrap_or_else(|| default_bound(group));
    let mut out = Cochain::zero(group, 2);
    for g in 0..n {
        for h in 0..n {
            let r = &rho[g] * &rho[h] * rho[group.mul(g, h)].adjoint();
            let (c, dev) = scalar_part(&r);
            if dev > SCALAR_TOL {
                return Err(Error::NotProjective(dev));
            }
            out.set(&[g, h], Phase::snap_complex(c, bound, SNAP_TOL)?);
        }
    }
    if !is_cocycle(&out) {
        return Err(Error::NotCocycle);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::solver::{is_coboundary, same_class};
    use crate::linalg::named_matrix;

    fn pauli_rep() -> Vec<CMatrix> {
        ["I", "X", "Y", "Z"].iter().map(|s| named_matrix(s).unwrap()).collect()
    }

    #[test]
    fn pauli_class_is_nontrivial() {
        let g = GroupTable::z2xz2();
        let w = projective_2cocycle(&g, &pauli_rep(), None).unwrap();
        // element 1 is (0,1), element 2 is (1,0)
        assert_eq!(w.get(&[1, 2]), Phase::new(1, 4));
        assert_eq!(w.get(&[2, 1]), Phase::new(3, 4));
        assert!(w.is_normalized());
        assert!(is_coboundary(&w).unwrap().is_none());
        assert!(!same_class(&w, &Cochain::zero(&g, 2)).unwrap());
    }

    #[test]
    fn linear_rep_is_zero() {
        let g = GroupTable::z2xz2();
        let z = named_matrix("Z").unwrap();
        let x = named_matrix("X").unwrap();
        let reps = vec![
            linalg::identity(4),
            linalg::kron(&z, &linalg::identity(2)),
            linalg::kron(&linalg::identity(2), &x),
            linalg::kron(&z, &x),
        ];
        assert!(projective_2cocycle(&g, &reps, None).unwrap().is_zero());
    }

    #[test]
    fn non_scalar_residual_is_rejected() {
        let g = GroupTable::cyclic(2).unwrap();
        let s = named_matrix("S").unwrap();
        assert!(matches!(projective_2cocycle(&g, &[linalg::identity(2), s], None), Err(Error::NotProjective(_))));
    }
}
