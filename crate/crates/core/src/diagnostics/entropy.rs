use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::spin::density::DensityOperator;
use crate::spin::geometry::{region_offsets, Region};

/// Eigenvalues at or below this are treated as exact zeros in logarithms.
pub const ENTROPY_CLIP: f64 = 1e-14;
pub const MI_CROSS_CHECK_TOL: f64 = 1e-8;

fn xlogx(x: f64) -> f64 {
    if x > ENTROPY_CLIP {
        x * x.ln()
    } else {
        0.0
    }
}

/// `−tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_matrix(rho.matrix())
}

pub fn entropy_matrix(m: &CMatrix) -> f64 {
    -linalg::eigvalsh(m).into_iter().map(xlogx).sum::<f64>()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct RelativeEntropy {
    /// `+∞` when the support condition fails.
    pub value: f64,
    pub support_violation: bool,
}

/// `S(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<RelativeEntropy> {
    rho.same_shape(sigma)?;
    Ok(relative_entropy_matrices(rho.matrix(), sigma.matrix()))
}

pub fn relative_entropy_matrices(rho: &CMatrix, sigma: &CMatrix) -> RelativeEntropy {
    let neg_s = linalg::eigvalsh(rho).into_iter().map(xlogx).sum::<f64>();
    let (mu, w) = linalg::eigh(sigma);
    let rw = rho * &w;
    let mut cross = 0.0;
    for (k, &m) in mu.iter().enumerate() {
        // ⟨w_k|ρ|w_k⟩
        let weight: C64 = w.column(k).dotc(&rw.column(k));
        let weight = weight.re;
        if m > ENTROPY_CLIP {
            cross += weight * m.ln();
        } else if weight > 1e-12 {
            return RelativeEntropy { value: f64::INFINITY, support_violation: true };
        }
    }
    RelativeEntropy { value: (neg_s - cross).max(0.0), support_violation: false }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct MutualInformation {
    /// `S(ρ_Γ) + S(ρ_Γᶜ) − S(ρ)` in nats.
    pub entropic: f64,
    /// `S(ρ ‖ ρ_Γ ⊗ ρ_Γᶜ)` in nats.
    pub relative: f64,
    pub discrepancy: f64,
    pub bits: f64,
}

impl MutualInformation {
    pub fn value(&self) -> f64 {
        self.entropic
    }
}

/// `ρ_Γ ⊗ ρ_Γᶜ` laid out in the original site order.
pub fn product_of_marginals(rho: &DensityOperator, gamma: &Region) -> Result<CMatrix> {
    let n = rho.geometry().num_sites();
    let comp = gamma.complement(n);
    let ra = rho.restrict(gamma)?;
    let rc = rho.restrict(&comp)?;
    let (off_a, off_c) = region_offsets(rho.geometry().local_dims(), gamma);
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for (c2, &oc2) in off_c.iter().enumerate() {
        for (c1, &oc1) in off_c.iter().enumerate() {
            let wc = rc.matrix()[(c1, c2)];
            if wc == linalg::ZERO {
                continue;
            }
            for (a2, &oa2) in off_a.iter().enumerate() {
                for (a1, &oa1) in off_a.iter().enumerate() {
                    out[(oa1 + oc1, oa2 + oc2)] = ra.matrix()[(a1, a2)] * wc;
                }
            }
        }
    }
    Ok(out)
}

/// Both formulas are evaluated; disagreement beyond 1e-8 is an error.
pub fn mutual_information(rho: &DensityOperator, gamma: &Region) -> Result<MutualInformation> {
    let n = rho.geometry().num_sites();
    rho.geometry().check_region(gamma)?;
    let comp = gamma.complement(n);
    let entropic = von_neumann_entropy(&rho.restrict(gamma)?) + von_neumann_entropy(&rho.restrict(&comp)?)
        - von_neumann_entropy(rho);
    let rel = relative_entropy_matrices(rho.matrix(), &product_of_marginals(rho, gamma)?);
    if rel.support_violation {
        return Err(Error::CrossCheck("ρ is not supported inside ρ_Γ ⊗ ρ_Γᶜ".into()));
    }
    let discrepancy = (entropic - rel.value).abs();
    if discrepancy > MI_CROSS_CHECK_TOL {
        return Err(Error::CrossCheck(format!(
            "mutual information paths disagree: {entropic} vs {} (Δ = {discrepancy:e})",
            rel.value
        )));
    }
    Ok(MutualInformation { entropic, relative: rel.value, discrepancy, bits: entropic / std::f64::consts::LN_2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::states;
    use std::f64::consts::LN_2;

    #[test]
    fn bell_pair_mi() {
        let h = 1.0 / 2f64.sqrt();
        let v =
            crate::linalg::CVector::from_vec(vec![C64::new(h, 0.0), C64::from(0.0), C64::from(0.0), C64::new(h, 0.0)]);
        let g = crate::spin::ChainGeometry::qubits(2).unwrap();
        let rho = DensityOperator::from_trusted(g, &v * v.adjoint());
        let mi = mutual_information(&rho, &Region::new(vec![0])).unwrap();
        assert!((mi.entropic - 2.0 * LN_2).abs() < 1e-10);
    }

    #[test]
    fn product_and_parity_states() {
        let p = states::plus_product(4).unwrap();
        assert!(mutual_information(&p, &Region::new(vec![0, 1])).unwrap().entropic.abs() < 1e-10);
        let r2 = states::parity_projected(4).unwrap();
        for cut in [vec![0], vec![0, 1], vec![1, 3]] {
            let mi = mutual_information(&r2, &Region::new(cut)).unwrap();
            assert!((mi.entropic - LN_2).abs() < 1e-10);
        }
    }

    #[test]
    fn support_violation_is_infinite() {
        let zero = states::basis(&[2], &[0]).unwrap();
        let one = states::basis(&[2], &[1]).unwrap();
        let r = relative_entropy(&zero, &one).unwrap();
        assert!(r.support_violation && r.value.is_infinite());
    }
}
