//! Seeded random matrices and states for probes and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = ginibre(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random density matrix `GG†/tr` with `G` of shape `n x rank`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, n, rank.max(1));
    let m = &g * g.adjoint();
    let t = m.trace().re;
    m.unscale(t)
}

pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = ginibre(rng, n, 1).column(0).clone_owned();
    let norm = v.norm();
    v.unscale(norm)
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n);
    (&g + g.adjoint()).scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let a = haar_unitary(&mut rng(7), 6);
        let b = haar_unitary(&mut rng(7), 6);
        assert!(unitarity_defect(&a) < 1e-12);
        assert_eq!(a, b);
    }
}
