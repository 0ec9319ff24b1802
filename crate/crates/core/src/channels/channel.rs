//! Bath evolutions in Stinespring form: `ρ ↦ tr_B[W (ρ ⊗ Φ_B) W†]`.
//!
//! The joint chain puts the system on sites `0..N` and the bath on
//! `N..N+M`, so system labels are the fast digits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::spin::density::{DensityOperator, PureStateVector};
use crate::spin::geometry::{check_dim, ChainGeometry, Region};
use crate::spin::operator::embed_matrix;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::circuit::Circuit;

pub const UNITARY_TOL: f64 = 1e-10;
pub const STRONG_TOL: f64 = 1e-9;
pub const CHOI_TOL: f64 = 1e-10;
/// Bath eigenvalues below this are dropped from Kraus extraction.
const BATH_CLIP: f64 = 1e-14;

#[derive(Clone, Debug)]
pub enum BathState {
    Pure(PureStateVector),
    Mixed(DensityOperator),
}

impl BathState {
    /// Pure when the density matrix has purity 1 (to 1e-12).
    pub fn from_density(rho: DensityOperator) -> Result<Self> {
        rho.validate()?;
        if (rho.purity() - 1.0).abs() > 1e-12 {
            return Ok(BathState::Mixed(rho));
        }
        let (vals, vecs) = linalg::eigh(rho.matrix());
        let top = vals.len() - 1;
        let v = vecs.column(top).into_owned();
        Ok(BathState::Pure(PureStateVector::normalize(rho.geometry().clone(), v)?))
    }

    pub fn geometry(&self) -> &ChainGeometry {
        match self {
            BathState::Pure(p) => p.geometry(),
            BathState::Mixed(r) => r.geometry(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            BathState::Pure(p) => p.to_density(),
            BathState::Mixed(r) => r.clone(),
        }
    }

    /// Spectral decomposition `Σ p_b |b⟩⟨b|`, negligible weights dropped.
    fn ensemble(&self) -> Vec<(f64, CVector)> {
        match self {
            BathState::Pure(p) => vec![(1.0, p.amplitudes().clone())],
            BathState::Mixed(r) => {
                let (vals, vecs) = linalg::eigh(r.matrix());
                vals.iter()
                    .enumerate()
                    .filter(|(_, &p)| p > BATH_CLIP)
                    .map(|(k, &p)| (p, vecs.column(k).into_owned()))
                    .collect()
            }
        }
    }

    fn tensor(a: &BathState, b: &BathState) -> Result<BathState> {
        let geometry = a.geometry().concat(b.geometry())?;
        Ok(match (a, b) {
            (BathState::Pure(x), BathState::Pure(y)) => {
                BathState::Pure(PureStateVector::new(geometry, y.amplitudes().kronecker(x.amplitudes()))?)
            }
            _ => BathState::Mixed(DensityOperator::tensor(&a.to_density(), &b.to_density())?),
        })
    }
}

#[derive(Clone, Debug)]
pub enum JointUnitary {
    Matrix(CMatrix),
    Gates(Circuit),
}

#[derive(Clone, Debug)]
pub struct Channel {
    system: ChainGeometry,
    bath: BathState,
    joint: ChainGeometry,
    unitary: JointUnitary,
}

impl Channel {
    pub fn new(system: ChainGeometry, bath: BathState, unitary: JointUnitary) -> Result<Self> {
        let joint = system.concat(bath.geometry())?;
        check_dim(joint.dim())?;
        match &unitary {
            JointUnitary::Matrix(w) => {
                if w.nrows() != joint.dim() || w.ncols() != joint.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "joint unitary is {}x{}, joint dimension {}",
                        w.nrows(),
                        w.ncols(),
                        joint.dim()
                    )));
                }
                let defect = linalg::unitarity_defect(w);
                if defect > UNITARY_TOL {
                    return Err(Error::NotUnitary(defect));
                }
            }
            JointUnitary::Gates(c) => {
                for gate in c.gates() {
                    gate.check_fits(&joint)?;
                }
            }
        }
        Ok(Channel { system, bath, joint, unitary })
    }

    /// Trivial one-qubit bath in `|0⟩`, no gates.
    pub fn identity(system: ChainGeometry) -> Result<Self> {
        let bath = PureStateVector::new(ChainGeometry::qubits(1)?, CVector::from_vec(vec![linalg::ONE, linalg::ZERO]))?;
        Self::new(system, BathState::Pure(bath), JointUnitary::Gates(Circuit::identity()))
    }

    pub fn system(&self) -> &ChainGeometry {
        &self.system
    }

    pub fn bath(&self) -> &BathState {
        &self.bath
    }

    pub fn joint_geometry(&self) -> &ChainGeometry {
        &self.joint
    }

    pub fn unitary(&self) -> &JointUnitary {
        &self.unitary
    }

    pub fn system_region(&self) -> Region {
        Region::all(self.system.num_sites())
    }

    pub fn bath_region(&self) -> Region {
        let n = self.system.num_sites();
        Region::new((n..self.joint.num_sites()).collect())
    }

    /// Dense `W`.
    pub fn joint_matrix(&self) -> Result<CMatrix> {
        match &self.unitary {
            JointUnitary::Matrix(w) => Ok(w.clone()),
            JointUnitary::Gates(c) => c.unitary(&self.joint),
        }
    }

    pub fn apply_to_vector(&self, v: &CVector) -> Result<CVector> {
        match &self.unitary {
            JointUnitary::Matrix(w) => Ok(w * v),
            JointUnitary::Gates(c) => c.apply_to_vector(&self.joint, v),
        }
    }

    pub fn apply_adjoint_to_vector(&self, v: &CVector) -> Result<CVector> {
        match &self.unitary {
            JointUnitary::Matrix(w) => Ok(w.adjoint() * v),
            JointUnitary::Gates(c) => c.adjoint().apply_to_vector(&self.joint, v),
        }
    }

    fn check_input(&self, geometry: &ChainGeometry) -> Result<()> {
        if geometry.local_dims() != self.system.local_dims() {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on {:?}, state lives on {:?}",
                self.system.local_dims(),
                geometry.local_dims()
            )));
        }
        Ok(())
    }

    /// `W (ρ ⊗ Φ_B) W†` before the bath is traced out.
    pub fn joint_state(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.check_input(rho.geometry())?;
        let start = DensityOperator::tensor(rho, &self.bath.to_density())?;
        let m = match &self.unitary {
            JointUnitary::Matrix(w) => w * start.matrix() * w.adjoint(),
            JointUnitary::Gates(c) => c.conjugate_matrix(&self.joint, start.matrix())?,
        };
        Ok(DensityOperator::from_trusted(self.joint.clone(), m))
    }

    /// `W (|ψ⟩ ⊗ |φ_B⟩)`; needs a pure bath.
    pub fn joint_pure(&self, psi: &PureStateVector) -> Result<PureStateVector> {
        self.check_input(psi.geometry())?;
        let BathState::Pure(phi) = &self.bath else {
            return Err(Error::Precondition("pure joint state needs a pure bath".into()));
        };
        let v = self.apply_to_vector(&phi.amplitudes().kronecker(psi.amplitudes()))?;
        PureStateVector::normalize(self.joint.clone(), v)
    }

    /// Kraus operators `K_{a,b} = √p_b (𝕀 ⊗ ⟨a|) W (𝕀 ⊗ |b⟩)` over bath basis
    /// states `a` and bath eigenvectors `b`.
    pub fn kraus_operators(&self) -> Result<Vec<CMatrix>> {
        let w = self.joint_matrix()?;
        let d = self.system.dim();
        let db = self.bath.geometry().dim();
        let mut out = Vec::new();
        for (p, b) in self.bath.ensemble() {
            // W restricted to inputs |s⟩ ⊗ |b⟩
            let mut iso = CMatrix::zeros(d * db, d);
            for s in 0..d {
                let mut col = CVector::zeros(d * db);
                for (k, &amp) in b.iter().enumerate() {
                    col += w.column(s + d * k) * amp;
                }
                iso.set_column(s, &col);
            }
            let sp = C64::from(p.sqrt());
            for a in 0..db {
                out.push(iso.rows(a * d, d).into_owned() * sp);
            }
        }
        Ok(out)
    }

    /// Choi matrix `J = Σ_{ij} E(|i⟩⟨j|) ⊗ |i⟩⟨j|`, output index fast.
    pub fn choi_matrix(&self) -> Result<CMatrix> {
        let d = self.system.dim();
        check_dim(d * d)?;
        let mut j = CMatrix::zeros(d * d, d * d);
        for k in self.kraus_operators()? {
            // column-major storage is exactly vec(K) with index a + D·i
            let v = CVector::from_column_slice(k.as_slice());
            j += &v * v.adjoint();
        }
        Ok(j)
    }

    /// Complete positivity and trace preservation from the Choi matrix.
    pub fn validate_cptp(&self) -> Result<CptpCheck> {
        let d = self.system.dim();
        let j = self.choi_matrix()?;
        let min_eigenvalue = linalg::eigvalsh(&linalg::hermitian_part(&j)).first().copied().unwrap_or(0.0);
        // tr_out J must be the identity on the input
        let mut tp = 0.0f64;
        for i in 0..d {
            for k in 0..d {
                let mut s = linalg::ZERO;
                for a in 0..d {
                    s += j[(a + d * i, a + d * k)];
                }
                let target = if i == k { linalg::ONE } else { linalg::ZERO };
                tp = tp.max((s - target).norm());
            }
        }
        let check = CptpCheck { min_eigenvalue, trace_preservation_defect: tp };
        if min_eigenvalue < -CHOI_TOL {
            return Err(Error::InvalidChannel(format!("Choi matrix has eigenvalue {min_eigenvalue:e}")));
        }
        if tp > CHOI_TOL {
            return Err(Error::InvalidChannel(format!("trace preservation defect {tp:e}")));
        }
        Ok(check)
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct CptpCheck {
    pub min_eigenvalue: f64,
    pub trace_preservation_defect: f64,
}

/// `tr_B[W (ρ ⊗ Φ_B) W†]`.
pub fn apply_channel(ch: &Channel, rho: &DensityOperator) -> Result<DensityOperator> {
    let out = ch.joint_state(rho)?.restrict(&ch.system_region())?;
    let (t_in, t_out) = (rho.trace(), out.trace());
    if (t_in - t_out).abs() > 1e-10 {
        return Err(Error::CrossCheck(format!("trace {t_in} became {t_out}")));
    }
    Ok(out)
}

/// `ch1` followed by `ch2`, as one bath evolution on the bath `B1 ⊗ B2`.
pub fn compose_channels(ch1: &Channel, ch2: &Channel) -> Result<Channel> {
    if ch1.system != ch2.system {
        return Err(Error::DimensionMismatch(format!(
            "composing channels on {:?} and {:?}",
            ch1.system.local_dims(),
            ch2.system.local_dims()
        )));
    }
    let n = ch1.system.num_sites();
    let m1 = ch1.bath.geometry().num_sites();
    let bath = BathState::tensor(&ch1.bath, &ch2.bath)?;
    let joint = ch1.system.concat(bath.geometry())?;
    check_dim(joint.dim())?;
    let shift = move |s: usize| if s < n { s } else { s + m1 };
    let unitary = match (&ch1.unitary, &ch2.unitary) {
        (JointUnitary::Gates(c1), JointUnitary::Gates(c2)) => JointUnitary::Gates(c1.then(&c2.remapped(shift)?)),
        _ => {
            let dims = joint.local_dims();
            let first: Vec<usize> = (0..n + m1).collect();
            let second: Vec<usize> = (0..ch2.joint.num_sites()).map(shift).collect();
            let w1 = embed_matrix(&ch1.joint_matrix()?, dims, &first);
            let w2 = embed_matrix(&ch2.joint_matrix()?, dims, &second);
            JointUnitary::Matrix(w2 * w1)
        }
    };
    Channel::new(ch1.system.clone(), bath, unitary)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StrongSymmetryCheck {
    pub symmetric: bool,
    /// `max_g ‖W(U_g⊗𝕀) − (U_g⊗𝕀)W‖` over generators.
    pub defect: f64,
    pub per_generator: Vec<(usize, f64)>,
}

/// Whether `W` commutes with `U_g ⊗ 𝕀_B` for every generator. Joint
/// dimensions up to 256 use a full SVD; larger ones power iteration.
pub fn is_strongly_symmetric_channel(ch: &Channel, action: &SymmetryAction) -> Result<StrongSymmetryCheck> {
    ch.check_input(action.geometry())?;
    let mut per_generator = Vec::new();
    for g in action.generators() {
        let u = action.circuit_of(g);
        let commutator = |v: &CVector| -> Result<CVector> {
            let a = ch.apply_to_vector(&u.apply_to_vector(&ch.joint, v)?)?;
            let b = u.apply_to_vector(&ch.joint, &ch.apply_to_vector(v)?)?;
            Ok(a - b)
        };
        let dim = ch.joint.dim();
        let defect = if dim <= 256 {
            let mut m = CMatrix::zeros(dim, dim);
            for k in 0..dim {
                let mut e = CVector::zeros(dim);
                e[k] = linalg::ONE;
                m.set_column(k, &commutator(&e)?);
            }
            linalg::spectral_norm(&m)
        } else {
            let ua = u.adjoint();
            let adjoint = |v: &CVector| -> Result<CVector> {
                let a = ua.apply_to_vector(&ch.joint, &ch.apply_adjoint_to_vector(v)?)?;
                let b = ch.apply_adjoint_to_vector(&ua.apply_to_vector(&ch.joint, v)?)?;
                Ok(a - b)
            };
            // gate shapes were checked at construction, so these cannot fail
            linalg::spectral_norm_of(
                dim,
                |v| commutator(v).unwrap_or_else(|_| CVector::zeros(dim)),
                |v| adjoint(v).unwrap_or_else(|_| CVector::zeros(dim)),
            )
        };
        per_generator.push((g, defect));
    }
    let defect = per_generator.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(StrongSymmetryCheck { symmetric: defect <= STRONG_TOL, defect, per_generator })
}
