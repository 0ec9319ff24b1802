use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::random;
use crate::spin::geometry::{dim_cap, ChainGeometry, Region};
use crate::spin::operator::LocalOperator;
use crate::symmetry::circuit::Circuit;

const HOMOMORPHISM_TOL: f64 = 1e-9;
const VALIDATION_SEED: u64 = 0x0a11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationKind {
    OnSite,
    Circuit { radius: usize, periodic: bool },
}

/// A finite group acting on a chain through on-site unitaries or finite-depth
/// circuits, `α_g(O) = U_g O U_g†`.
#[derive(Clone, Debug)]
pub struct SymmetryAction {
    group: GroupTable,
    geometry: ChainGeometry,
    kind: RealizationKind,
    circuits: Vec<Circuit>,
    translation_covariant: bool,
}

impl SymmetryAction {
    /// `unitaries[g][s]` acts on site `s` for element `g`.
    pub fn on_site(group: GroupTable, geometry: ChainGeometry, unitaries: Vec<Vec<CMatrix>>) -> Result<Self> {
        if unitaries.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} elements realized for a group of order {}",
                unitaries.len(),
                group.order()
            )));
        }
        let mut circuits = Vec::with_capacity(unitaries.len());
        for (g, per_site) in unitaries.iter().enumerate() {
            if per_site.len() != geometry.num_sites() {
                return Err(Error::InvalidAction(format!(
                    "element {} has {} site unitaries for {} sites",
                    group.label(g),
                    per_site.len(),
                    geometry.num_sites()
                )));
            }
            for (s, u) in per_site.iter().enumerate() {
                if u.nrows() != geometry.local_dim(s) || u.ncols() != geometry.local_dim(s) {
                    return Err(Error::DimensionMismatch(format!(
                        "element {} on site {s}: {}x{} unitary for local dimension {}",
                        group.label(g),
                        u.nrows(),
                        u.ncols(),
                        geometry.local_dim(s)
                    )));
                }
            }
            circuits.push(Circuit::on_site(per_site)?);
        }
        let action =
            SymmetryAction { group, geometry, kind: RealizationKind::OnSite, circuits, translation_covariant: false };
        action.validate()?;
        Ok(action)
    }

    /// The same single-site unitary on every site, per element.
    pub fn on_site_uniform(group: GroupTable, geometry: ChainGeometry, unitaries: Vec<CMatrix>) -> Result<Self> {
        let n = geometry.num_sites();
        let per = unitaries.into_iter().map(|u| vec![u; n]).collect();
        let mut a = Self::on_site(group, geometry, per)?;
        a.translation_covariant = true;
        Ok(a)
    }

    /// Z2 generated by `X = ∏ σ^x` on a qubit chain.
    pub fn z2_flip(num_sites: usize) -> Result<Self> {
        let g = GroupTable::cyclic(2)?;
        let geo = ChainGeometry::qubits(num_sites)?;
        Self::on_site_uniform(g, geo, vec![linalg::identity(2), linalg::named_matrix("X").unwrap()])
    }

    /// Circuit realization with a declared light-cone radius.
    pub fn circuit(
        group: GroupTable,
        geometry: ChainGeometry,
        circuits: Vec<Circuit>,
        radius: usize,
        periodic: bool,
    ) -> Result<Self> {
        if circuits.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} elements realized for a group of order {}",
                circuits.len(),
                group.order()
            )));
        }
        let ring = periodic.then_some(geometry.num_sites());
        for (g, c) in circuits.iter().enumerate() {
            for gate in c.gates() {
                gate.check_fits(&geometry)?;
            }
            let actual = c.light_cone_radius(ring);
            if actual > radius {
                return Err(Error::InvalidAction(format!(
                    "element {} spreads operators by {actual} sites, more than the declared radius {radius}",
                    group.label(g)
                )));
            }
        }
        let action = SymmetryAction {
            group,
            geometry,
            kind: RealizationKind::Circuit { radius, periodic },
            circuits,
            translation_covariant: false,
        };
        action.validate()?;
        Ok(action)
    }

    /// `g ↦ W U_g W†` for a finite-depth circuit `W`.
    pub fn conjugated_by(&self, w: &Circuit, w_radius: usize) -> Result<Self> {
        let circuits = self.circuits.iter().map(|c| w.adjoint().then(c).then(w)).collect();
        let (radius, periodic) = match self.kind {
            RealizationKind::OnSite => (0, false),
            RealizationKind::Circuit { radius, periodic } => (radius, periodic),
        };
        Self::circuit(self.group.clone(), self.geometry.clone(), circuits, radius + 2 * w_radius, periodic)
    }

    /// An on-site action restricted to `window`, its sites renumbered
    /// `0..|window|`.
    pub fn restricted_on_site(&self, window: &Region) -> Result<Self> {
        if !self.is_on_site() {
            return Err(Error::Precondition("only on-site actions restrict to a window".into()));
        }
        self.geometry.check_region(window)?;
        let sites = window.sites();
        let circuits = self
            .circuits
            .iter()
            .map(|c| {
                c.filtered(|gate| gate.support().is_subset(window))
                    .remapped(|s| sites.iter().position(|&w| w == s).unwrap_or(s))
            })
            .collect::<Result<Vec<_>>>()?;
        let action = SymmetryAction {
            group: self.group.clone(),
            geometry: ChainGeometry::new(self.geometry.sub_dims(sites))?,
            kind: RealizationKind::OnSite,
            circuits,
            translation_covariant: self.translation_covariant,
        };
        action.validate()?;
        Ok(action)
    }

    pub fn with_translation_covariant(mut self, flag: bool) -> Self {
        self.translation_covariant = flag;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.geometry.dim() <= dim_cap() {
            return self.validate_on_vectors();
        }
        self.validate_on_basis()
    }

    /// `U_g U_h U_gh†` (and `U_e`) must be scalars; a random vector is an
    /// eigenvector of a non-scalar unitary with probability zero.
    fn validate_on_vectors(&self) -> Result<()> {
        let mut rng = random::rng(VALIDATION_SEED);
        let probes: Vec<CVector> = (0..2).map(|_| random::random_pure(&mut rng, self.geometry.dim())).collect();
        let off_scalar = |v: &CVector, w: &CVector| (w - v * v.dotc(w)).norm();
        let e = self.group.identity();
        for v in &probes {
            let dev = off_scalar(v, &self.circuits[e].apply_to_vector(&self.geometry, v)?);
            if dev > HOMOMORPHISM_TOL {
                return Err(Error::InvalidAction(format!("identity element acts nontrivially (deviation {dev:e})")));
            }
            for g in 0..self.group.order() {
                for h in 0..self.group.order() {
                    let gh = self.group.mul(g, h);
                    let mut w = self.circuits[gh].adjoint().apply_to_vector(&self.geometry, v)?;
                    w = self.circuits[h].apply_to_vector(&self.geometry, &w)?;
                    w = self.circuits[g].apply_to_vector(&self.geometry, &w)?;
                    let dev = off_scalar(v, &w);
                    if dev > HOMOMORPHISM_TOL {
                        return Err(self.not_homomorphic(g, h, dev));
                    }
                }
            }
        }
        Ok(())
    }

    fn not_homomorphic(&self, g: usize, h: usize, dev: f64) -> Error {
        Error::InvalidAction(format!(
            "α_{} α_{} ≠ α_{} (deviation {dev:e})",
            self.group.label(g),
            self.group.label(h),
            self.group.label(self.group.mul(g, h))
        ))
    }

    fn validate_on_basis(&self) -> Result<()> {
        let n = self.group.order();
        let e = self.group.identity();
        // operator basis: matrix units on each site
        let mut basis = Vec::new();
        for s in 0..self.geometry.num_sites() {
            let d = self.geometry.local_dim(s);
            for i in 0..d {
                for j in 0..d {
                    let mut m = CMatrix::zeros(d, d);
                    m[(i, j)] = linalg::ONE;
                    basis.push(LocalOperator::single(s, m)?);
                }
            }
        }
        for b in &basis {
            let img = self.circuits[e].conjugate_local(b)?;
            let dev = img.distance(b)?;
            if dev > HOMOMORPHISM_TOL {
                return Err(Error::InvalidAction(format!("identity element acts nontrivially (deviation {dev:e})")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for b in &basis {
                    let lhs = self.circuits[g].conjugate_local(&self.circuits[h].conjugate_local(b)?)?;
                    let rhs = self.circuits[gh].conjugate_local(b)?;
                    let dev = lhs.distance(&rhs)?;
                    if dev > HOMOMORPHISM_TOL {
                        return Err(self.not_homomorphic(g, h, dev));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn kind(&self) -> &RealizationKind {
        &self.kind
    }

    pub fn is_on_site(&self) -> bool {
        self.kind == RealizationKind::OnSite
    }

    pub fn radius(&self) -> usize {
        match self.kind {
            RealizationKind::OnSite => 0,
            RealizationKind::Circuit { radius, .. } => radius,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, RealizationKind::Circuit { periodic: true, .. })
    }

    pub fn translation_covariant(&self) -> bool {
        self.translation_covariant
    }

    pub fn circuit_of(&self, g: usize) -> &Circuit {
        &self.circuits[g]
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    /// A small generating set, identity excluded.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.group.identity()];
        for g in 0..self.group.order() {
            if !span.contains(&g) {
                gens.push(g);
                let mut k = 0;
                while k < span.len() {
                    for &x in &gens {
                        let y = self.group.mul(span[k], x);
                        if !span.contains(&y) {
                            span.push(y);
                        }
                    }
                    k += 1;
                }
            }
        }
        gens
    }

    /// `α_g(op)`. Non-periodic circuits refuse operators whose radius-grown
    /// support would leave the chain.
    pub fn apply(&self, g: usize, op: &LocalOperator) -> Result<LocalOperator> {
        op.check_fits(&self.geometry)?;
        if let RealizationKind::Circuit { radius, periodic: false } = self.kind {
            let lo = op.support().min().unwrap_or(0);
            let hi = op.support().max().unwrap_or(0);
            if lo < radius || hi + radius >= self.geometry.num_sites() {
                return Err(Error::BoundaryTruncation {
                    support: op.support().sites().to_vec(),
                    radius,
                    num_sites: self.geometry.num_sites(),
                });
            }
        }
        self.circuits[g].conjugate_local(op)
    }

    /// Dense `U_g` on the whole chain.
    pub fn unitary(&self, g: usize) -> Result<CMatrix> {
        self.circuits[g].unitary(&self.geometry)
    }

    /// `U_g m U_g†` for a full-chain matrix.
    pub fn conjugate_matrix(&self, g: usize, m: &CMatrix) -> Result<CMatrix> {
        self.circuits[g].conjugate_matrix(&self.geometry, m)
    }

    /// `U_g m`.
    pub fn apply_left(&self, g: usize, m: &CMatrix) -> Result<CMatrix> {
        self.circuits[g].apply_left(&self.geometry, m)
    }

    /// The circuit of `g` moved onto a larger chain, site `s` to `map(s)`.
    pub fn embedded_circuit(&self, g: usize, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        self.circuits[g].remapped(map)
    }

    /// Phase `c` with `U_g U_h = c U_gh`, computed on the dense unitaries.
    pub fn projective_phase(&self, g: usize, h: usize) -> Result<C64> {
        let ug = self.unitary(g)?;
        let uh = self.unitary(h)?;
        let ugh = self.unitary(self.group.mul(g, h))?;
        let m = ug * uh * ugh.adjoint();
        Ok(linalg::trace(&m) / C64::from(m.nrows() as f64))
    }
}
