use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::spin::density::DensityOperator;

/// Relative cutoff below which eigenvalues of `ρ` are treated as zero.
pub const FIDELITY_CLIP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct FidelityValue {
    pub value: f64,
    /// Smallest eigenvalue of `ρ` kept in the support projection.
    pub min_retained_eigenvalue: f64,
    pub retained_rank: usize,
}

/// `F(ρ,σ) = (tr √(√ρ σ √ρ))²` for unnormalized PSD inputs.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<FidelityValue> {
    rho.same_shape(sigma)?;
    Ok(fidelity_matrices(rho.matrix(), sigma.matrix()))
}

/// `F = ‖√ρ √σ‖₁²`. With `ρ = A A†` and `σ = B B†` over the retained
/// eigenvectors, the trace norm is the sum of singular values of `A† B`.
/// Taking singular values avoids square roots of eigenvalue dust, which
/// would otherwise enter at the `1e-8` level for rank-deficient inputs.
pub fn fidelity_matrices(rho: &CMatrix, sigma: &CMatrix) -> FidelityValue {
    SupportFactor::new(rho).fidelity(&SupportFactor::new(sigma))
}

/// `V √Λ` over the eigenvalues above the relative cutoff; reusable when one
/// argument is paired with several others.
pub struct SupportFactor {
    factor: CMatrix,
    min_eigenvalue: f64,
}

impl SupportFactor {
    pub fn new(m: &CMatrix) -> Self {
        let (values, vectors) = linalg::eigh(m);
        let tr: f64 = values.iter().map(|v| v.max(0.0)).sum();
        let cut = FIDELITY_CLIP * tr.max(f64::MIN_POSITIVE);
        let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] > cut).collect();
        let factor = CMatrix::from_fn(m.nrows(), keep.len(), |i, j| vectors[(i, keep[j])] * values[keep[j]].sqrt());
        let min_eigenvalue = keep.iter().map(|&k| values[k]).fold(f64::INFINITY, f64::min);
        SupportFactor { factor, min_eigenvalue: if keep.is_empty() { 0.0 } else { min_eigenvalue } }
    }

    pub fn rank(&self) -> usize {
        self.factor.ncols()
    }

    /// `F(self, other)`.
    pub fn fidelity(&self, other: &SupportFactor) -> FidelityValue {
        let retained_rank = self.rank();
        let value = if retained_rank == 0 || other.rank() == 0 {
            0.0
        } else {
            let s: f64 = (self.factor.adjoint() * &other.factor).singular_values().iter().sum();
            s * s
        };
        FidelityValue { value, min_retained_eigenvalue: self.min_eigenvalue, retained_rank }
    }
}

/// `‖P_ρ P_σ‖_F` for the support projectors; zero iff the supports are
/// orthogonal. Independent of the fidelity code path.
pub fn support_overlap(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let proj = |m: &CMatrix| {
        let (vals, vecs) = linalg::eigh(m);
        let tr: f64 = vals.iter().map(|v| v.max(0.0)).sum();
        let cut = FIDELITY_CLIP * tr.max(f64::MIN_POSITIVE);
        linalg::spectral_map(&vals, &vecs, |x| if x > cut { 1.0 } else { 0.0 })
    };
    linalg::frobenius_norm(&(proj(rho) * proj(sigma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::spin::states;

    #[test]
    fn basic_values() {
        let rho = states::random_state(&[2, 2], 4, 3).unwrap();
        assert!((fidelity(&rho, &rho).unwrap().value - 1.0).abs() < 1e-12);
        let zero = states::basis(&[2], &[0]).unwrap();
        let one = states::basis(&[2], &[1]).unwrap();
        assert!(fidelity(&zero, &one).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn pure_states_give_squared_overlap() {
        let mut r = random::rng(11);
        let a = random::random_pure(&mut r, 4);
        let b = random::random_pure(&mut r, 4);
        let f = fidelity_matrices(&(&a * a.adjoint()), &(&b * b.adjoint())).value;
        assert!((f - a.dotc(&b).norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_scaling() {
        let rho = states::random_state(&[2], 2, 5).unwrap();
        let sigma = states::random_state(&[2], 2, 6).unwrap();
        let f = fidelity(&rho, &sigma).unwrap().value;
        let g = fidelity(&rho.scaled(2.0), &sigma.scaled(3.0)).unwrap().value;
        assert!((g - 6.0 * f).abs() < 1e-12);
    }
}
