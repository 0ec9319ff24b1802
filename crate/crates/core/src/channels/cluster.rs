//! Example channels: CZ coupling to a `|+⟩` bath that turns the joint state
//! into a cluster state, qubit dephasing, and random dilations.

use serde::{Deserialize, Serialize};

use crate::channels::channel::{BathState, Channel, JointUnitary};
use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMatrix, CVector};
use crate::random;
use crate::spin::density::{DensityOperator, PureStateVector};
use crate::spin::geometry::ChainGeometry;
use crate::spin::operator::LocalOperator;
use crate::spin::states;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::circuit::Circuit;

/// Bath layout around an `N`-spin system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterBath {
    /// `N` bath spins on a ring, `b_i` between `s_{i−1}` and `s_i`. Every
    /// bath spin meets two system spins, so `W` commutes with `∏X ⊗ 𝕀`.
    #[default]
    Periodic,
    /// `N + 1` bath spins `b_0 … b_N` on an open line. The end spins meet a
    /// single system spin and `W (∏X ⊗ 𝕀) W† = ∏X ⊗ Z_{b_0} Z_{b_N}`.
    Open,
}

impl ClusterBath {
    pub fn bath_sites(self, n: usize) -> usize {
        match self {
            ClusterBath::Periodic => n,
            ClusterBath::Open => n + 1,
        }
    }
}

/// CZ edges on the joint chain (system `0..N`, bath `N..`), as two layers.
pub fn cluster_edges(n: usize, layout: ClusterBath) -> [Vec<(usize, usize)>; 2] {
    let m = layout.bath_sites(n);
    let left = (0..n).map(|i| (i, n + i)).collect();
    let right = (0..n).map(|i| (i, n + (i + 1) % m)).collect();
    [left, right]
}

pub fn cluster_dephasing_channel(n: usize) -> Result<Channel> {
    cluster_dephasing_channel_with(n, ClusterBath::default())
}

pub fn cluster_dephasing_channel_with(n: usize, layout: ClusterBath) -> Result<Channel> {
    if n < 2 {
        return Err(Error::Precondition(format!("cluster channel needs at least 2 system spins, got {n}")));
    }
    let cz = linalg::named_matrix("CZ").unwrap_or_else(|| linalg::identity(4));
    let layers = cluster_edges(n, layout)
        .iter()
        .map(|edges| {
            edges
                .iter()
                .map(|&(a, b)| LocalOperator::new(vec![a, b], vec![2, 2], cz.clone()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let bath = states::plus_product_vector(layout.bath_sites(n))?;
    Channel::new(ChainGeometry::qubits(n)?, BathState::Pure(bath), JointUnitary::Gates(Circuit::new(layers)?))
}

/// `X_v ∏_{u ~ v} Z_u` for every vertex of the joint graph.
pub fn cluster_stabilizers(n: usize, layout: ClusterBath) -> Result<Vec<LocalOperator>> {
    let total = n + layout.bath_sites(n);
    let mut nbrs = vec![Vec::new(); total];
    for edges in cluster_edges(n, layout) {
        for (a, b) in edges {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    nbrs.iter()
        .enumerate()
        .map(|(v, ns)| {
            let mut factors = vec![(v, 'X')];
            factors.extend(ns.iter().map(|&u| (u, 'Z')));
            factors.sort_unstable();
            LocalOperator::pauli_string(&factors)
        })
        .collect()
}

/// Real parts of `⟨ψ|S|ψ⟩`.
pub fn stabilizer_expectations(psi: &PureStateVector, stabilizers: &[LocalOperator]) -> Result<Vec<f64>> {
    stabilizers
        .iter()
        .map(|s| Ok(psi.amplitudes().dotc(&s.apply_to_vector(psi.geometry(), psi.amplitudes())?).re))
        .collect()
}

/// `ρ ↦ (1−p) ρ + p Z_s ρ Z_s` on qubit `site`: CZ to a bath qubit in
/// `√(1−p)|0⟩ + √p|1⟩`.
pub fn dephasing_channel(system: ChainGeometry, site: usize, p: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("dephasing strength {p} outside [0, 1]")));
    }
    if site >= system.num_sites() || system.local_dim(site) != 2 {
        return Err(Error::Precondition(format!("site {site} is not a qubit of the chain")));
    }
    let n = system.num_sites();
    let bath = PureStateVector::new(
        ChainGeometry::qubits(1)?,
        CVector::from_vec(vec![c64((1.0 - p).sqrt(), 0.0), c64(p.sqrt(), 0.0)]),
    )?;
    let cz = LocalOperator::new(
        vec![site, n],
        vec![2, 2],
        linalg::named_matrix("CZ").unwrap_or_else(|| linalg::identity(4)),
    )?;
    Channel::new(system, BathState::Pure(bath), JointUnitary::Gates(Circuit::new(vec![vec![cz]])?))
}

/// Haar joint unitary and a random full-rank bath state.
pub fn random_channel(system: ChainGeometry, bath: ChainGeometry, seed: u64) -> Result<Channel> {
    let mut rng = random::rng(seed);
    let db = bath.dim();
    let phi = DensityOperator::from_trusted(bath, random::random_density_matrix(&mut rng, db, db));
    let w = random::haar_unitary(&mut rng, system.dim() * db);
    Channel::new(system, BathState::from_density(phi)?, JointUnitary::Matrix(w))
}

/// `W = exp(iH̄)` with `H̄` the twirl of a random Hermitian `H` over
/// `U_g ⊗ 𝕀`, so `W` commutes with the whole group.
pub fn random_strongly_symmetric_channel(action: &SymmetryAction, bath: ChainGeometry, seed: u64) -> Result<Channel> {
    let mut rng = random::rng(seed);
    let system = action.geometry().clone();
    let joint = system.concat(&bath)?;
    let h = random::random_hermitian(&mut rng, joint.dim());
    let mut twirled = CMatrix::zeros(joint.dim(), joint.dim());
    for g in 0..action.group().order() {
        twirled += action.circuit_of(g).conjugate_matrix(&joint, &h)?;
    }
    twirled /= c64(action.group().order() as f64, 0.0);
    let (vals, vecs) = linalg::eigh(&linalg::hermitian_part(&twirled));
    let phases = CVector::from_iterator(vals.len(), vals.iter().map(|&x| c64(x.cos(), x.sin())));
    let w = &vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint();
    let db = bath.dim();
    let phi = DensityOperator::from_trusted(bath, random::random_density_matrix(&mut rng, db, db));
    Channel::new(system, BathState::from_density(phi)?, JointUnitary::Matrix(w))
}
