//! Implementing unitaries of inner automorphisms on a finite window.
//!
//! For `β = Ad_V` the Choi form `J[(i,k),(j,l)] = β(E_ij)[k,l]` equals
//! `w w†` with `w[(i,k)] = V[k,i]`. One column of `J` fixes `w`; the
//! remaining entries test the rank-1 structure.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE};
use crate::random;
use crate::spin::density::PureStateVector;
use crate::spin::geometry::{subsystem_offsets, ChainGeometry, Region};
use crate::spin::operator::LocalOperator;
use crate::symmetry::circuit::Circuit;

pub const RANK_TOL: f64 = 1e-8;
const LOCALITY_TOL: f64 = 1e-9;
const MAX_JOINT_DIM: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct InnerUnitary {
    pub matrix: CMatrix,
    /// `‖J − w w†‖_F / ‖J‖_F`.
    pub rank_ratio: f64,
}

/// Bring `op` onto exactly `window`, failing if it acts outside.
pub fn onto_window(op: &LocalOperator, window: &Region, dim_of: impl Fn(usize) -> usize) -> Result<LocalOperator> {
    if op.support().is_subset(window) {
        return op.padded(window, dim_of);
    }
    let outside: usize =
        op.support().sites().iter().zip(op.dims()).filter(|(s, _)| !window.contains(**s)).map(|(_, d)| *d).product();
    let reduced = op.partial_trace(window)?.scale(C64::from(1.0 / outside as f64));
    let dev = reduced.distance(op)?;
    if dev > LOCALITY_TOL * op.norm().max(1.0) {
        return Err(Error::NotInner(dev));
    }
    reduced.padded(window, dim_of)
}

/// Gauge: first entry (row-major) above `1e-9·max|V|` made positive real.
pub fn fix_gauge(v: &CMatrix) -> CMatrix {
    let scale = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    for i in 0..v.nrows() {
        for j in 0..v.ncols() {
            let z = v[(i, j)];
            if z.norm() > 1e-9 * scale {
                return v * (z.conj() / C64::from(z.norm()));
            }
        }
    }
    v.clone()
}

/// Rank-1 factorization of a Choi matrix laid out as `J[k + D·i, l + D·j]
/// = β(E_ij)[k,l]`, normalized so that `tr J = D` for an automorphism.
pub fn factor_choi(j: &CMatrix, d: usize) -> Result<InnerUnitary> {
    if j.nrows() != d * d || j.ncols() != d * d {
        return Err(Error::DimensionMismatch(format!("Choi matrix {}x{} for dimension {d}", j.nrows(), j.ncols())));
    }
    // pivot column: largest diagonal entry
    let p = (0..d * d).max_by(|&a, &b| j[(a, a)].re.total_cmp(&j[(b, b)].re)).unwrap_or(0);
    let top = j[(p, p)].re;
    if top <= 0.0 {
        return Err(Error::NotInner(1.0));
    }
    let w = j.column(p) / C64::from(top.sqrt());
    let mut num = 0.0;
    let mut den = 0.0;
    for b in 0..d * d {
        for a in 0..d * d {
            num += (j[(a, b)] - w[a] * w[b].conj()).norm_sqr();
            den += j[(a, b)].norm_sqr();
        }
    }
    let rank_ratio = if den > 0.0 { (num / den).sqrt() } else { 1.0 };
    if rank_ratio > RANK_TOL {
        return Err(Error::NotInner(rank_ratio));
    }
    let v = CMatrix::from_fn(d, d, |k, i| w[k + d * i]);
    let defect = linalg::unitarity_defect(&v);
    if defect > RANK_TOL {
        return Err(Error::NotInner(defect));
    }
    Ok(InnerUnitary { matrix: fix_gauge(&v), rank_ratio })
}

/// `V` with `β(a) = V a V†` for every operator `a` on `window`.
pub fn recover_inner_unitary(
    beta: impl Fn(&LocalOperator) -> Result<LocalOperator>,
    window: &Region,
    dims: &[usize],
) -> Result<InnerUnitary> {
    if dims.len() != window.len() {
        return Err(Error::DimensionMismatch(format!("{} dims for a {}-site window", dims.len(), window.len())));
    }
    let dim_of = |s: usize| dims[window.sites().iter().position(|&t| t == s).unwrap_or(0)];
    let d: usize = dims.iter().product();
    let mut j = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for jj in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(i, jj)] = ONE;
            let unit = LocalOperator::new(window.sites().to_vec(), dims.to_vec(), e)?;
            let img = onto_window(&beta(&unit)?, window, dim_of)?.into_matrix();
            for k in 0..d {
                for l in 0..d {
                    j[(k + d * i, l + d * jj)] = img[(k, l)];
                }
            }
        }
    }
    factor_choi(&j, d)
}

/// Choi matrix of `Ad_W` seen from the window, times `D`.
///
/// A reference copy of the window is maximally entangled with it and the
/// remaining sites start in a seeded random product state; after `W` (then
/// `after` on the window, if given) the reduced state of window and
/// reference is the Choi matrix, rank 1 exactly when `W` factorizes as
/// `V ⊗ R` across the window and its complement.
fn window_choi(
    w: &Circuit,
    after: Option<&CMatrix>,
    geometry: &ChainGeometry,
    window: &Region,
    seed: u64,
) -> Result<CMatrix> {
    geometry.check_region(window)?;
    let n = geometry.num_sites();
    let wdims = geometry.sub_dims(window.sites());
    let d: usize = wdims.iter().product();
    let mut jdims = geometry.local_dims().to_vec();
    jdims.extend_from_slice(&wdims);
    let total: usize = jdims.iter().product();
    if total > MAX_JOINT_DIM {
        return Err(Error::DimensionCap { dim: total, cap: MAX_JOINT_DIM });
    }
    let joint = ChainGeometry::unchecked(jdims.clone());
    let refs: Vec<usize> = (n..n + window.len()).collect();
    let rest: Vec<usize> = (0..n).filter(|s| !window.contains(*s)).collect();
    let mut rng = random::rng(seed);
    let chi: Vec<CVector> = rest.iter().map(|&s| random::random_pure(&mut rng, jdims[s])).collect();
    let off_w = subsystem_offsets(&jdims, window.sites());
    let off_r = subsystem_offsets(&jdims, &refs);
    let off_c = subsystem_offsets(&jdims, &rest);
    let mut v = CVector::zeros(total);
    let norm = C64::from(1.0 / (d as f64).sqrt());
    for (c, &oc) in off_c.iter().enumerate() {
        let mut amp = norm;
        let mut rem = c;
        for (k, &s) in rest.iter().enumerate() {
            amp *= chi[k][rem % jdims[s]];
            rem /= jdims[s];
        }
        for i in 0..d {
            v[off_w[i] + off_r[i] + oc] = amp;
        }
    }
    let mut out = w.apply_to_vector(&joint, &v)?;
    if let Some(m) = after {
        out = LocalOperator::new(window.sites().to_vec(), wdims.clone(), m.clone())?.apply_to_vector(&joint, &out)?;
    }
    let psi = PureStateVector::normalize(joint, out)?;
    let keep = window.union(&Region::new(refs));
    Ok(psi.restrict(&keep)?.into_matrix() * C64::from(d as f64))
}

/// `V` for `β = Ad_W` with `W` a circuit on `geometry`, when `W = V ⊗ R`
/// across the window and its complement.
pub fn recover_from_circuit(w: &Circuit, geometry: &ChainGeometry, window: &Region, seed: u64) -> Result<InnerUnitary> {
    let d: usize = geometry.sub_dims(window.sites()).iter().product();
    factor_choi(&window_choi(w, None, geometry, window, seed)?, d)
}

/// How far `Ad_W` and `Ad_V` differ on the window algebra: the distance of
/// the Choi matrix of `Ad_{V†W}` from that of the identity map, relative to
/// the latter.
pub fn circuit_relation_residual(
    w: &Circuit,
    v: &CMatrix,
    geometry: &ChainGeometry,
    window: &Region,
    seed: u64,
) -> Result<f64> {
    let d: usize = geometry.sub_dims(window.sites()).iter().product();
    let j = window_choi(w, Some(&v.adjoint()), geometry, window, seed)?;
    let mut num = 0.0;
    for b in 0..d * d {
        for a in 0..d * d {
            let ident = if a % (d + 1) == 0 && b % (d + 1) == 0 { ONE } else { C64::from(0.0) };
            num += (j[(a, b)] - ident).norm_sqr();
        }
    }
    Ok(num.sqrt() / d as f64)
}
