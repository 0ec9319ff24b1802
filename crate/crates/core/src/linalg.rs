//! Dense complex linear algebra shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Textbook Kronecker product: the row/column index of `a` is the slow one.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().copied().sum()
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Rebuild `V diag(f(λ)) V†`.
pub fn spectral_map(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let s = f(lam);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * vectors.adjoint()
}

/// Square root of a positive semidefinite matrix, eigenvalues at or below
/// `clip` treated as zero.
pub fn psd_sqrt(m: &CMatrix, clip: f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    spectral_map(&values, &vectors, |x| if x > clip { x.sqrt() } else { 0.0 })
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

/// Spectral (operator) norm.
///
/// Small matrices use a full SVD; larger ones use power iteration on `A†A`,
/// which converges from below.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.nrows().max(m.ncols()) <= 256 {
        return m.clone().singular_values().iter().copied().fold(0.0, f64::max);
    }
    if frobenius_norm(m) == 0.0 {
        return 0.0;
    }
    let adj = m.adjoint();
    spectral_norm_of(m.ncols(), |v| m * v, |w| &adj * w)
}

/// Operator norm of a map given by its action and its adjoint's action,
/// estimated by power iteration on `A†A` (from below).
pub fn spectral_norm_of(dim: usize, apply: impl Fn(&CVector) -> CVector, adjoint: impl Fn(&CVector) -> CVector) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    // deterministic, generic start vector
    let mut v = CVector::from_fn(dim, |i, _| c64(1.0 + (i as f64 * 0.618).sin(), (i as f64 * 1.37).cos()));
    v /= C64::from(v.norm());
    let mut estimate = 0.0;
    for _ in 0..500 {
        let w = apply(&v);
        let u = adjoint(&w);
        let un = u.norm();
        if un == 0.0 {
            return w.norm();
        }
        let next = w.norm();
        v = u / C64::from(un);
        if (next - estimate).abs() <= 1e-13 * next.max(1.0) {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Maximum absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Named single- and two-qubit gates. Two-qubit matrices use the
/// little-endian convention: the first listed site is the fast index.
pub fn named_matrix(name: &str) -> Option<CMatrix> {
    let m = |v: &[C64], n: usize| CMatrix::from_row_slice(n, n, v);
    let (o, l, i) = (ZERO, ONE, I);
    let h = 1.0 / 2f64.sqrt();
    Some(match name {
        "I" | "id" => identity(2),
        "X" => m(&[o, l, l, o], 2),
        "Y" => m(&[o, -i, i, o], 2),
        "Z" => m(&[l, o, o, -l], 2),
        "H" => m(&[c64(h, 0.0), c64(h, 0.0), c64(h, 0.0), c64(-h, 0.0)], 2),
        "S" => m(&[l, o, o, i], 2),
        "Sdg" => m(&[l, o, o, -i], 2),
        "CZ" => CMatrix::from_diagonal(&CVector::from_vec(vec![l, l, l, -l])),
        "SWAP" => m(&[l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l], 4),
        // control on the first (fast) site
        "CNOT" | "CX" => m(&[l, o, o, o, o, o, o, l, o, o, l, o, o, l, o, o], 4),
        _ => return None,
    })
}

pub fn pauli(symbol: char) -> Option<CMatrix> {
    named_matrix(&symbol.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_is_sorted_and_reconstructs() {
        let m = CMatrix::from_row_slice(2, 2, &[c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(2.0, 0.0)]);
        let (vals, vecs) = eigh(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let back = spectral_map(&vals, &vecs, |x| x);
        assert!(max_abs_diff(&back, &m) < 1e-12);
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // basis index = control + 2*target
        let cx = named_matrix("CNOT").unwrap();
        let mut e1 = CVector::zeros(4);
        e1[1] = ONE;
        let out = &cx * e1;
        assert_eq!(out[3], ONE);
    }

    #[test]
    fn power_iteration_matches_svd() {
        let n = 300;
        let m = CMatrix::from_fn(n, n, |i, j| c64(((i * 7 + j * 3) % 11) as f64 - 5.0, ((i + 2 * j) % 5) as f64));
        let svd = m.clone().singular_values().iter().copied().fold(0.0, f64::max);
        assert!((spectral_norm(&m) - svd).abs() / svd < 1e-8);
    }
}
