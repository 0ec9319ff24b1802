use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::spin::geometry::{region_offsets, ChainGeometry, Region};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// A positive semidefinite operator on a chain. The trace need not be 1.
///
/// `labels[k]` is the site of the parent chain that position `k` came from,
/// so restrictions remember where they live.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    geometry: ChainGeometry,
    labels: Vec<usize>,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity and positivity; eigenvalues in `[-1e-10, 0)` are
    /// clipped to zero, anything more negative is an error.
    pub fn new(geometry: ChainGeometry, matrix: CMatrix) -> Result<Self> {
        check_shape(&geometry, &matrix)?;
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(herm));
        }
        let (values, vectors) = linalg::eigh(&matrix);
        let min = values.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL * scale {
            return Err(Error::NotPsd(min));
        }
        let matrix = if min < 0.0 {
            linalg::spectral_map(&values, &vectors, |x| x.max(0.0))
        } else {
            linalg::hermitian_part(&matrix)
        };
        let labels = (0..geometry.num_sites()).collect();
        Ok(DensityOperator { geometry, labels, matrix })
    }

    /// Skips validation. For matrices that are PSD by construction.
    pub fn from_trusted(geometry: ChainGeometry, matrix: CMatrix) -> Self {
        debug_assert_eq!(geometry.dim(), matrix.nrows());
        let labels = (0..geometry.num_sites()).collect();
        DensityOperator { geometry, labels, matrix }
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.geometry.num_sites() {
            return Err(Error::DimensionMismatch("label count differs from site count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn from_pure(psi: &PureStateVector) -> Self {
        let v = psi.amplitudes();
        Self::from_trusted(psi.geometry().clone(), v * v.adjoint())
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::ZeroOperator);
        }
        Ok(DensityOperator {
            geometry: self.geometry.clone(),
            labels: self.labels.clone(),
            matrix: self.matrix.unscale(t),
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        DensityOperator { geometry: self.geometry.clone(), labels: self.labels.clone(), matrix: self.matrix.scale(s) }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// Re-runs the constructor's checks on the stored matrix.
    pub fn validate(&self) -> Result<()> {
        DensityOperator::new(self.geometry.clone(), self.matrix.clone()).map(|_| ())
    }

    /// `a` occupies the low sites of the result, `b` the high ones.
    pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
        let geometry = a.geometry.concat(&b.geometry)?;
        let matrix = linalg::kron(&b.matrix, &a.matrix);
        let offset = a.labels.iter().max().map_or(0, |m| m + 1);
        let mut labels = a.labels.clone();
        labels.extend(b.labels.iter().map(|l| l + offset));
        Ok(DensityOperator { geometry, labels, matrix })
    }

    /// Partial trace over the complement of `region` (positions in this chain).
    pub fn restrict(&self, region: &Region) -> Result<DensityOperator> {
        self.geometry.check_region(region)?;
        let dims = self.geometry.local_dims();
        let (off_a, off_c) = region_offsets(dims, region);
        let k = off_a.len();
        let mut out = CMatrix::zeros(k, k);
        for (b, &ob) in off_a.iter().enumerate() {
            for (a, &oa) in off_a.iter().enumerate() {
                let mut s = ZERO;
                for &c in &off_c {
                    s += self.matrix[(oa + c, ob + c)];
                }
                out[(a, b)] = s;
            }
        }
        let geometry = ChainGeometry::unchecked(self.geometry.sub_dims(region.sites()));
        let labels = region.sites().iter().map(|&s| self.labels[s]).collect();
        Ok(DensityOperator { geometry, labels, matrix: out })
    }

    /// Restrict to the sites whose parent labels are given.
    pub fn restrict_labels(&self, labels: &[usize]) -> Result<DensityOperator> {
        let positions = labels
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|m| m == l)
                    .ok_or_else(|| Error::InvalidRegion(format!("site {l} not present in this state")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.restrict(&Region::new(positions))
    }

    pub fn same_shape(&self, other: &DensityOperator) -> Result<()> {
        if self.geometry.local_dims() != other.geometry.local_dims() {
            return Err(Error::DimensionMismatch(format!(
                "states on {:?} vs {:?}",
                self.geometry.local_dims(),
                other.geometry.local_dims()
            )));
        }
        Ok(())
    }

    /// Normalized trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        self.same_shape(other)?;
        Ok(trace_distance_matrices(&self.matrix, &other.matrix))
    }

    /// Operator norm of the difference.
    pub fn operator_norm_distance(&self, other: &DensityOperator) -> Result<f64> {
        self.same_shape(other)?;
        let diff = &self.matrix - &other.matrix;
        Ok(linalg::eigvalsh(&diff).iter().map(|x| x.abs()).fold(0.0, f64::max))
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        // tr(rho A) without forming the product
        let mut s = ZERO;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                s += self.matrix[(j, i)] * op[(i, j)];
            }
        }
        s
    }
}

pub fn trace_distance_matrices(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    0.5 * linalg::eigvalsh(&diff).iter().map(|x| x.abs()).sum::<f64>()
}

pub fn operator_norm_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::spectral_norm(&(a - b))
}

fn check_shape(geometry: &ChainGeometry, matrix: &CMatrix) -> Result<()> {
    let d = geometry.dim();
    if matrix.nrows() != d || matrix.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "chain dimension {d} but matrix is {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    Ok(())
}

/// Unit vector on a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateVector {
    geometry: ChainGeometry,
    amplitudes: CVector,
}

impl PureStateVector {
    pub fn new(geometry: ChainGeometry, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != geometry.dim() {
            return Err(Error::DimensionMismatch(format!(
                "chain dimension {} but {} amplitudes",
                geometry.dim(),
                amplitudes.len()
            )));
        }
        let n = amplitudes.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(n));
        }
        Ok(PureStateVector { geometry, amplitudes })
    }

    pub fn normalize(geometry: ChainGeometry, amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.norm();
        if n == 0.0 {
            return Err(Error::ZeroOperator);
        }
        Self::new(geometry, amplitudes.unscale(n))
    }

    pub fn product(geometry: ChainGeometry, local: &[CVector]) -> Result<Self> {
        if local.len() != geometry.num_sites() {
            return Err(Error::DimensionMismatch("one local vector per site required".into()));
        }
        let mut v = CVector::from_element(1, linalg::ONE);
        for (s, l) in local.iter().enumerate() {
            if l.len() != geometry.local_dim(s) {
                return Err(Error::DimensionMismatch(format!("site {s} vector has length {}", l.len())));
            }
            v = l.kronecker(&v);
        }
        Self::normalize(geometry, v)
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    /// Reduced density matrix on `region` computed from the amplitudes.
    pub fn restrict(&self, region: &Region) -> Result<DensityOperator> {
        self.geometry.check_region(region)?;
        let (off_a, off_c) = region_offsets(self.geometry.local_dims(), region);
        let k = off_a.len();
        // psi as a k x |C| matrix
        let mut m = CMatrix::zeros(k, off_c.len());
        for (c, &oc) in off_c.iter().enumerate() {
            for (a, &oa) in off_a.iter().enumerate() {
                m[(a, c)] = self.amplitudes[oa + oc];
            }
        }
        let geometry = ChainGeometry::unchecked(self.geometry.sub_dims(region.sites()));
        let labels = region.sites().to_vec();
        DensityOperator::from_trusted(geometry, &m * m.adjoint()).with_labels(labels)
    }

    pub fn overlap(&self, other: &PureStateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn plus() -> CVector {
        CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]).unscale(2f64.sqrt())
    }

    #[test]
    fn rejects_negative_and_clips_dust() {
        let g = ChainGeometry::qubits(1).unwrap();
        let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(1.1, 0.0), c64(-0.1, 0.0)]));
        assert!(matches!(DensityOperator::new(g.clone(), bad), Err(Error::NotPsd(_))));
        let dust = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(1.0, 0.0), c64(-1e-12, 0.0)]));
        let rho = DensityOperator::new(g, dust).unwrap();
        assert!(rho.eigenvalues()[0] >= 0.0);
        rho.validate().unwrap();
    }

    #[test]
    fn restrict_product_state() {
        let g = ChainGeometry::qubits(2).unwrap();
        let psi = PureStateVector::product(g, &[plus(), plus()]).unwrap();
        let rho = psi.to_density();
        let r0 = rho.restrict(&Region::new(vec![0])).unwrap();
        let expect = &plus() * plus().adjoint();
        assert!(linalg::max_abs_diff(r0.matrix(), &expect) < 1e-15);
        let r0p = psi.restrict(&Region::new(vec![0])).unwrap();
        assert!(linalg::max_abs_diff(r0p.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn tensor_places_first_factor_low() {
        let g = ChainGeometry::qubits(1).unwrap();
        let zero =
            DensityOperator::new(g.clone(), CMatrix::from_diagonal(&CVector::from_vec(vec![c64(1.0, 0.0), ZERO])))
                .unwrap();
        let one =
            DensityOperator::new(g, CMatrix::from_diagonal(&CVector::from_vec(vec![ZERO, c64(1.0, 0.0)]))).unwrap();
        let t = DensityOperator::tensor(&one, &zero).unwrap();
        // site 0 in |1>, site 1 in |0>: basis index 1
        assert_eq!(t.matrix()[(1, 1)], c64(1.0, 0.0));
        assert!(t.restrict(&Region::new(vec![0])).unwrap().trace_distance(&one).unwrap() < 1e-15);
    }

    #[test]
    fn orthogonal_states_have_unit_distance() {
        let g = ChainGeometry::qubits(1).unwrap();
        let zero =
            DensityOperator::new(g.clone(), CMatrix::from_diagonal(&CVector::from_vec(vec![c64(1.0, 0.0), ZERO])))
                .unwrap();
        let one =
            DensityOperator::new(g, CMatrix::from_diagonal(&CVector::from_vec(vec![ZERO, c64(1.0, 0.0)]))).unwrap();
        assert!((zero.trace_distance(&one).unwrap() - 1.0).abs() < 1e-15);
        assert!(zero.trace_distance(&zero).unwrap() < 1e-15);
        assert!((zero.operator_norm_distance(&one).unwrap() - 1.0).abs() < 1e-15);
    }
}
