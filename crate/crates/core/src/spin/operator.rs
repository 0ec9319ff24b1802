use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::spin::geometry::{subsystem_offsets, ChainGeometry, Region};

/// An operator acting on a handful of sites, identity elsewhere.
///
/// The matrix is indexed little-endian over the support in increasing site
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    support: Region,
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl LocalOperator {
    pub fn new(support: Vec<usize>, dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        if support.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} support sites but {} local dims",
                support.len(),
                dims.len()
            )));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != support.len() {
            return Err(Error::InvalidRegion(format!("repeated site in support {support:?}")));
        }
        let d: usize = dims.iter().product();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator on {support:?} needs a {d}x{d} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if sorted == support {
            return Ok(LocalOperator { support: Region::new(support), dims, matrix });
        }
        // reorder the tensor factors into increasing site order
        let order: Vec<usize> = sorted.iter().map(|s| support.iter().position(|t| t == s).unwrap()).collect();
        let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
        // digit k of the old label sits at position inv[k] of the new label
        let positions: Vec<usize> = (0..support.len()).map(|k| order.iter().position(|&o| o == k).unwrap()).collect();
        let perm = subsystem_offsets(&new_dims, &positions);
        let mut m = CMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                m[(perm[a], perm[b])] = matrix[(a, b)];
            }
        }
        Ok(LocalOperator { support: Region::new(sorted), dims: new_dims, matrix: m })
    }

    pub fn single(site: usize, matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(vec![site], vec![d], matrix)
    }

    /// Qubit Pauli string such as `pauli_string(&[(0, 'Z'), (3, 'X')])`.
    pub fn pauli_string(factors: &[(usize, char)]) -> Result<Self> {
        let mut op: Option<LocalOperator> = None;
        for &(site, p) in factors {
            let m = linalg::pauli(p).ok_or_else(|| Error::Parse(format!("unknown Pauli {p:?}")))?;
            let f = LocalOperator::single(site, m)?;
            op = Some(match op {
                None => f,
                Some(prev) => prev.mul(&f)?,
            });
        }
        op.ok_or_else(|| Error::InvalidRegion("empty Pauli string".into()))
    }

    pub fn identity(support: Vec<usize>, dims: Vec<usize>) -> Result<Self> {
        let d = dims.iter().product();
        Self::new(support, dims, linalg::identity(d))
    }

    pub fn support(&self) -> &Region {
        &self.support
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn norm(&self) -> f64 {
        linalg::frobenius_norm(&self.matrix)
    }

    pub fn operator_norm(&self) -> f64 {
        linalg::spectral_norm(&self.matrix)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.matrix.iter().all(|z| z.norm() <= tol)
    }

    pub fn adjoint(&self) -> Self {
        LocalOperator { support: self.support.clone(), dims: self.dims.clone(), matrix: self.matrix.adjoint() }
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        LocalOperator { support: self.support.clone(), dims: self.dims.clone(), matrix: self.matrix.map(|z| z.conj()) }
    }

    pub fn scale(&self, s: C64) -> Self {
        LocalOperator { support: self.support.clone(), dims: self.dims.clone(), matrix: self.matrix.map(|z| z * s) }
    }

    /// Trace out the support sites outside `keep`.
    pub fn partial_trace(&self, keep: &Region) -> Result<Self> {
        let sites = self.support.sites();
        let (kept, traced): (Vec<usize>, Vec<usize>) = (0..sites.len()).partition(|&k| keep.contains(sites[k]));
        let off_a = subsystem_offsets(&self.dims, &kept);
        let off_c = subsystem_offsets(&self.dims, &traced);
        let m = CMatrix::from_fn(off_a.len(), off_a.len(), |a, b| {
            off_c.iter().fold(ZERO, |s, &c| s + self.matrix[(off_a[a] + c, off_a[b] + c)])
        });
        Self::new(kept.iter().map(|&k| sites[k]).collect(), kept.iter().map(|&k| self.dims[k]).collect(), m)
    }

    pub fn with_matrix(&self, matrix: CMatrix) -> Result<Self> {
        Self::new(self.support.sites().to_vec(), self.dims.clone(), matrix)
    }

    pub fn translated(&self, shift: isize) -> Result<Self> {
        let sites = self
            .support
            .sites()
            .iter()
            .map(|&s| {
                let t = s as isize + shift;
                usize::try_from(t).map_err(|_| Error::InvalidRegion(format!("site {t} < 0 after translation")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sites, self.dims.clone(), self.matrix.clone())
    }

    /// Relabel sites through `map` (old site -> new site).
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Result<Self> {
        let sites: Vec<usize> = self.support.sites().iter().map(|&s| map(s)).collect();
        Self::new(sites, self.dims.clone(), self.matrix.clone())
    }

    fn local_dim_at(&self, site: usize) -> Option<usize> {
        self.support.sites().iter().position(|&s| s == site).map(|k| self.dims[k])
    }

    /// Pad with identities onto a larger support.
    pub fn padded(&self, support: &Region, dim_of: impl Fn(usize) -> usize) -> Result<Self> {
        let positions = self
            .support
            .positions_in(support)
            .ok_or_else(|| Error::InvalidRegion(format!("{:?} is not within {:?}", self.support, support)))?;
        let dims: Vec<usize> =
            support.sites().iter().map(|&s| self.local_dim_at(s).unwrap_or_else(|| dim_of(s))).collect();
        let matrix = embed_matrix(&self.matrix, &dims, &positions);
        Ok(LocalOperator { support: support.clone(), dims, matrix })
    }

    fn joint_with(&self, other: &LocalOperator) -> Result<(LocalOperator, LocalOperator)> {
        let support = self.support.union(&other.support);
        for &s in support.sites() {
            if let (Some(a), Some(b)) = (self.local_dim_at(s), other.local_dim_at(s)) {
                if a != b {
                    return Err(Error::DimensionMismatch(format!("site {s} has dimension {a} vs {b}")));
                }
            }
        }
        let dim_of = |s: usize| self.local_dim_at(s).or_else(|| other.local_dim_at(s)).unwrap();
        Ok((self.padded(&support, dim_of)?, other.padded(&support, dim_of)?))
    }

    /// Operator product `self * other` on the union of supports.
    pub fn mul(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.joint_with(other)?;
        Ok(LocalOperator { support: a.support, dims: a.dims, matrix: a.matrix * b.matrix })
    }

    pub fn add(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.joint_with(other)?;
        Ok(LocalOperator { support: a.support, dims: a.dims, matrix: a.matrix + b.matrix })
    }

    pub fn sub(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.joint_with(other)?;
        Ok(LocalOperator { support: a.support, dims: a.dims, matrix: a.matrix - b.matrix })
    }

    /// `U · self · U†`, applying `U` in place rather than as a padded product.
    pub fn conjugated_by(&self, u: &LocalOperator) -> Result<Self> {
        for &s in u.support.sites() {
            if let Some(d) = self.local_dim_at(s) {
                if Some(d) != u.local_dim_at(s) {
                    return Err(Error::DimensionMismatch(format!(
                        "site {s} has dimension {d} vs {:?}",
                        u.local_dim_at(s)
                    )));
                }
            }
        }
        let support = self.support.union(&u.support);
        let base = if support == self.support {
            self.clone()
        } else {
            let dim_of = |s: usize| u.local_dim_at(s).unwrap_or(1);
            self.padded(&support, dim_of)?
        };
        let positions = u.support.positions_in(&support).expect("union contains the gate support");
        let left = apply_left(&u.matrix, &base.dims, &positions, &base.matrix);
        let matrix = apply_right(&u.matrix.adjoint(), &base.dims, &positions, &left);
        Ok(LocalOperator { support: base.support, dims: base.dims, matrix })
    }

    /// Largest entry of `self - other` after padding to a common support.
    pub fn distance(&self, other: &LocalOperator) -> Result<f64> {
        let (a, b) = self.joint_with(other)?;
        Ok(linalg::max_abs_diff(&a.matrix, &b.matrix))
    }

    pub fn check_fits(&self, geometry: &ChainGeometry) -> Result<Vec<usize>> {
        geometry.check_region(&self.support)?;
        for (k, &s) in self.support.sites().iter().enumerate() {
            if geometry.local_dim(s) != self.dims[k] {
                return Err(Error::DimensionMismatch(format!(
                    "operator dimension {} on site {s}, chain has {}",
                    self.dims[k],
                    geometry.local_dim(s)
                )));
            }
        }
        Ok(self.support.sites().to_vec())
    }

    /// Full-chain matrix with identity on the complement.
    pub fn embed(&self, geometry: &ChainGeometry) -> Result<CMatrix> {
        let positions = self.check_fits(geometry)?;
        Ok(embed_matrix(&self.matrix, geometry.local_dims(), &positions))
    }

    /// `O * m` for a full-chain matrix `m`, without forming the embedding.
    pub fn apply_left(&self, geometry: &ChainGeometry, m: &CMatrix) -> Result<CMatrix> {
        let positions = self.check_fits(geometry)?;
        Ok(apply_left(&self.matrix, geometry.local_dims(), &positions, m))
    }

    /// `m * O` for a full-chain matrix `m`.
    pub fn apply_right(&self, geometry: &ChainGeometry, m: &CMatrix) -> Result<CMatrix> {
        let positions = self.check_fits(geometry)?;
        Ok(apply_right(&self.matrix, geometry.local_dims(), &positions, m))
    }

    /// `O m O†`.
    pub fn conjugate(&self, geometry: &ChainGeometry, m: &CMatrix) -> Result<CMatrix> {
        let left = self.apply_left(geometry, m)?;
        self.adjoint().apply_right(geometry, &left)
    }

    pub fn apply_to_vector(&self, geometry: &ChainGeometry, v: &CVector) -> Result<CVector> {
        let positions = self.check_fits(geometry)?;
        Ok(apply_to_vector(&self.matrix, geometry.local_dims(), &positions, v))
    }
}

/// Embed `op`, whose tensor digit `k` lives on `positions[k]`, into the space
/// with local dimensions `dims`.
pub fn embed_matrix(op: &CMatrix, dims: &[usize], positions: &[usize]) -> CMatrix {
    let (off_a, off_c) = offsets_pair(dims, positions);
    let d: usize = dims.iter().product();
    let mut m = CMatrix::zeros(d, d);
    for &c in &off_c {
        for (b, &ob) in off_a.iter().enumerate() {
            for (a, &oa) in off_a.iter().enumerate() {
                m[(oa + c, ob + c)] = op[(a, b)];
            }
        }
    }
    m
}

fn offsets_pair(dims: &[usize], positions: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let comp: Vec<usize> = (0..dims.len()).filter(|s| !positions.contains(s)).collect();
    (subsystem_offsets(dims, positions), subsystem_offsets(dims, &comp))
}

pub fn apply_left(op: &CMatrix, dims: &[usize], positions: &[usize], m: &CMatrix) -> CMatrix {
    let (off_a, off_c) = offsets_pair(dims, positions);
    let k = off_a.len();
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    let mut buf = vec![ZERO; k];
    for j in 0..m.ncols() {
        let col = m.column(j);
        for &c in &off_c {
            for (b, &ob) in off_a.iter().enumerate() {
                buf[b] = col[ob + c];
            }
            for (a, &oa) in off_a.iter().enumerate() {
                let mut s = ZERO;
                for b in 0..k {
                    s += op[(a, b)] * buf[b];
                }
                out[(oa + c, j)] = s;
            }
        }
    }
    out
}

pub fn apply_right(op: &CMatrix, dims: &[usize], positions: &[usize], m: &CMatrix) -> CMatrix {
    let (off_a, off_c) = offsets_pair(dims, positions);
    let k = off_a.len();
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for &c in &off_c {
        for b in 0..k {
            let ob = off_a[b] + c;
            for (a, &oa) in off_a.iter().enumerate() {
                let w = op[(a, b)];
                if w == ZERO {
                    continue;
                }
                let src = m.column(oa + c).clone_owned();
                let mut dst = out.column_mut(ob);
                dst.axpy(w, &src, ONE_C);
            }
        }
    }
    out
}

const ONE_C: C64 = linalg::ONE;

pub fn apply_to_vector(op: &CMatrix, dims: &[usize], positions: &[usize], v: &CVector) -> CVector {
    let (off_a, off_c) = offsets_pair(dims, positions);
    let k = off_a.len();
    let mut out = CVector::zeros(v.len());
    let mut buf = vec![ZERO; k];
    for &c in &off_c {
        for (b, &ob) in off_a.iter().enumerate() {
            buf[b] = v[ob + c];
        }
        for (a, &oa) in off_a.iter().enumerate() {
            let mut s = ZERO;
            for b in 0..k {
                s += op[(a, b)] * buf[b];
            }
            out[oa + c] = s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, named_matrix};

    fn geo(n: usize) -> ChainGeometry {
        ChainGeometry::qubits(n).unwrap()
    }

    #[test]
    fn embed_site0_is_fast_index() {
        let z = named_matrix("Z").unwrap();
        let op = LocalOperator::single(0, z.clone()).unwrap();
        let full = op.embed(&geo(2)).unwrap();
        // textbook kron(I, Z) since site 0 is the low digit
        assert!(linalg::max_abs_diff(&full, &kron(&linalg::identity(2), &z)) < 1e-15);
    }

    #[test]
    fn unsorted_support_is_reordered() {
        let x = named_matrix("X").unwrap();
        let z = named_matrix("Z").unwrap();
        // matrix written with site 3 fast and site 1 slow
        let op = LocalOperator::new(vec![3, 1], vec![2, 2], kron(&z, &x)).unwrap();
        let expect = LocalOperator::pauli_string(&[(3, 'X'), (1, 'Z')]).unwrap();
        assert!(op.distance(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn apply_matches_embedding() {
        let g = geo(3);
        let m = CMatrix::from_fn(8, 8, |i, j| C64::new((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let op = LocalOperator::new(
            vec![0, 2],
            vec![2, 2],
            CMatrix::from_fn(4, 4, |i, j| C64::new((i + 2 * j) as f64, 1.0)),
        )
        .unwrap();
        let e = op.embed(&g).unwrap();
        assert!(linalg::max_abs_diff(&op.apply_left(&g, &m).unwrap(), &(&e * &m)) < 1e-12);
        assert!(linalg::max_abs_diff(&op.apply_right(&g, &m).unwrap(), &(&m * &e)) < 1e-12);
        let v = m.column(3).clone_owned();
        let ev = &e * &v;
        let av = op.apply_to_vector(&g, &v).unwrap();
        assert!((ev - av).norm() < 1e-12);
    }

    #[test]
    fn product_on_union_of_supports() {
        let zx = LocalOperator::pauli_string(&[(0, 'Z'), (1, 'X')]).unwrap();
        let x = LocalOperator::pauli_string(&[(1, 'X')]).unwrap();
        let z = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
        assert!(zx.mul(&x).unwrap().distance(&z).unwrap() < 1e-15);
    }
}
