use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::anomaly::half_chain::HalfChainAction;
use crate::anomaly::inner::{circuit_relation_residual, fix_gauge, recover_from_circuit, RANK_TOL};
use crate::cohomology::cochain::{is_cocycle, Cochain};
use crate::cohomology::json::CocycleJson;
use crate::cohomology::projective::{scalar_part, SNAP_TOL};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupTable};
use crate::linalg::{self, CMatrix};
use crate::phase::Phase;
use crate::spin::geometry::{ChainGeometry, Region};
use crate::spin::matrix_json::MatrixSpec;
use crate::spin::operator::LocalOperator;
use crate::symmetry::circuit::Circuit;
use crate::symmetry::spec::{build_circuit, element_index, GateSpec};

pub const SCALAR_TOL: f64 = 1e-8;
/// Seed of the random product state placed outside the window.
const BATH_SEED: u64 = 0x5eed;

/// Boundary unitaries `V_{g,h}` with `α^R_g α^R_h = Ad_{V_{g,h}} α^R_{gh}`.
#[derive(Clone, Debug)]
pub struct BoundaryCocycleData {
    group: GroupTable,
    geometry: ChainGeometry,
    window: Region,
    /// `v[g·|G| + h]`, a matrix on the window.
    v: Vec<CMatrix>,
    alpha: Vec<Circuit>,
    /// Largest defining-relation residual on the window algebra; `None` for
    /// imported data.
    residual: Option<f64>,
}

/// Default denominator bound for snapped 3-cocycle phases.
pub fn default_bound(group: &GroupTable) -> u64 {
    4 * (group.order() as u64).pow(3)
}

fn window_units(geometry: &ChainGeometry, window: &Region) -> Result<Vec<LocalOperator>> {
    let mut out = Vec::new();
    for &s in window.sites() {
        let d = geometry.local_dim(s);
        for i in 0..d {
            for j in 0..d {
                let mut m = CMatrix::zeros(d, d);
                m[(i, j)] = linalg::ONE;
                out.push(LocalOperator::single(s, m)?);
            }
        }
    }
    Ok(out)
}

/// Recover every `V_{g,h}` on the boundary window and check the defining
/// relation on single-site matrix units.
pub fn boundary_cocycle_data(half: &HalfChainAction) -> Result<BoundaryCocycleData> {
    let group = half.group().clone();
    let n = group.order();
    let geometry = half.geometry().clone();
    let window = half.window().clone();
    let mut v = Vec::with_capacity(n * n);
    let mut residual: f64 = 0.0;
    for g in 0..n {
        for h in 0..n {
            let w = half.defect_circuit(g, h);
            let inner = recover_from_circuit(&w, &geometry, &window, BATH_SEED)?;
            // independent draw of the product state outside the window
            let r = circuit_relation_residual(&w, &inner.matrix, &geometry, &window, BATH_SEED + 1)?;
            if r > RANK_TOL {
                return Err(Error::NotInner(r));
            }
            residual = residual.max(r);
            v.push(inner.matrix);
        }
    }
    Ok(BoundaryCocycleData { group, geometry, window, v, alpha: half.circuits().to_vec(), residual: Some(residual) })
}

impl BoundaryCocycleData {
    /// Externally supplied data: `v[g·|G|+h]` on `window`, `alpha[g]` on the
    /// same geometry.
    pub fn from_parts(
        group: GroupTable,
        geometry: ChainGeometry,
        window: Region,
        v: Vec<CMatrix>,
        alpha: Vec<Circuit>,
    ) -> Result<Self> {
        let n = group.order();
        if v.len() != n * n || alpha.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} boundary unitaries and {} actions for a group of order {n}",
                v.len(),
                alpha.len()
            )));
        }
        geometry.check_region(&window)?;
        let d: usize = geometry.sub_dims(window.sites()).iter().product();
        for m in &v {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "boundary unitary is {}x{}, window dimension {d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let defect = linalg::unitarity_defect(m);
            if defect > 1e-9 {
                return Err(Error::NotUnitary(defect));
            }
        }
        Ok(BoundaryCocycleData { group, geometry, window, v, alpha, residual: None })
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn window(&self) -> &Region {
        &self.window
    }

    pub fn v(&self, g: usize, h: usize) -> &CMatrix {
        &self.v[g * self.group.order() + h]
    }

    pub fn alpha(&self) -> &[Circuit] {
        &self.alpha
    }

    pub fn residual(&self) -> Option<f64> {
        self.residual
    }

    fn v_op(&self, g: usize, h: usize) -> Result<LocalOperator> {
        LocalOperator::new(
            self.window.sites().to_vec(),
            self.geometry.sub_dims(self.window.sites()),
            self.v(g, h).clone(),
        )
    }

    /// `max ‖α^R_g α^R_h(a) − V_{g,h} α^R_{gh}(a) V_{g,h}†‖` over single-site
    /// matrix units of the window. Cost grows with the light cone; meant for
    /// small imported data sets.
    pub fn relation_residual(&self) -> Result<f64> {
        let n = self.group.order();
        let mut worst: f64 = 0.0;
        for a in window_units(&self.geometry, &self.window)? {
            for g in 0..n {
                for h in 0..n {
                    let lhs = self.alpha[g].conjugate_local(&self.alpha[h].conjugate_local(&a)?)?;
                    let v = self.v_op(g, h)?;
                    let rhs = self.alpha[self.group.mul(g, h)].conjugate_local(&a)?.conjugated_by(&v)?;
                    worst = worst.max(lhs.distance(&rhs)?);
                }
            }
        }
        Ok(worst)
    }

    /// `V_{g,h} ↦ e^{2πiθ(g,h)} V_{g,h}`; the 3-cocycle shifts by `−δθ`.
    pub fn regauged(&self, theta: &Cochain) -> Result<Self> {
        if theta.degree() != 2 || theta.group() != &self.group {
            return Err(Error::CochainMismatch("regauge needs a 2-cochain over the same group".into()));
        }
        let mut out = self.clone();
        for (k, m) in out.v.iter_mut().enumerate() {
            *m = &*m * theta.values()[k].to_complex();
        }
        out.residual = None;
        Ok(out)
    }

    /// Re-impose the canonical phase gauge on every `V`.
    pub fn gauge_fixed(&self) -> Self {
        let mut out = self.clone();
        for m in out.v.iter_mut() {
            *m = fix_gauge(m);
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AnomalyCocycle {
    #[serde(with = "cocycle_json")]
    pub cocycle: Cochain,
    /// Largest deviation of any `ω_{g,h,k}` from a multiple of the identity.
    pub max_scalar_residual: f64,
    /// Largest distance of a raw phase from its snapped value, in turns.
    pub max_snap_error: f64,
    pub bound: u64,
}

mod cocycle_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Cochain, s: S) -> std::result::Result<S::Ok, S::Error> {
        CocycleJson::from_cochain(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Cochain, D::Error> {
        CocycleJson::deserialize(d)?.to_cochain().map_err(serde::de::Error::custom)
    }
}

/// `ω_{g,h,k} = V_{g,h} V_{gh,k} V_{g,hk}⁻¹ α^R_g(V_{h,k})⁻¹`, snapped.
pub fn anomaly_3cocycle(data: &BoundaryCocycleData, bound: Option<u64>) -> Result<AnomalyCocycle> {
    let group = &data.group;
    let n = group.order();
    let bound = bound.unwrap_or_else(|| default_bound(group));
    let mut cocycle = Cochain::zero(group, 3);
    let mut max_scalar_residual: f64 = 0.0;
    let mut max_snap_error: f64 = 0.0;
    for g in 0..n {
        for h in 0..n {
            let gh = group.mul(g, h);
            for k in 0..n {
                let hk = group.mul(h, k);
                let moved = data.alpha[g].conjugate_local(&data.v_op(h, k)?)?;
                let w = data
                    .v_op(g, h)?
                    .mul(&data.v_op(gh, k)?)?
                    .mul(&data.v_op(g, hk)?.adjoint())?
                    .mul(&moved.adjoint())?;
                let (c, dev) = scalar_part(w.matrix());
                if dev > SCALAR_TOL {
                    return Err(Error::NonScalarAnomaly(dev));
                }
                max_scalar_residual = max_scalar_residual.max(dev);
                let p = Phase::snap_complex(c, bound, SNAP_TOL)?;
                let raw = c.arg() / (2.0 * std::f64::consts::PI);
                let err = (raw - p.turns()).rem_euclid(1.0);
                max_snap_error = max_snap_error.max(err.min(1.0 - err));
                cocycle.set(&[g, h, k], p);
            }
        }
    }
    if !is_cocycle(&cocycle) {
        return Err(Error::NotCocycle);
    }
    Ok(AnomalyCocycle { cocycle, max_scalar_residual, max_snap_error, bound })
}

/// Import/export format for boundary data.
///
/// `v` maps `"g,h"` (labels or indices) to a matrix on the window; missing
/// pairs are the identity. `alpha` maps an element to circuit layers on the
/// window geometry; missing elements act trivially.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VDataJson {
    pub group: GroupSpec,
    pub local_dims: Vec<usize>,
    #[serde(default)]
    pub window: Option<Vec<usize>>,
    #[serde(default)]
    pub v: BTreeMap<String, MatrixSpec>,
    #[serde(default)]
    pub alpha: BTreeMap<String, Vec<Vec<GateSpec>>>,
}

impl VDataJson {
    pub fn build(&self) -> Result<BoundaryCocycleData> {
        let group = self.group.build()?;
        let n = group.order();
        let geometry = ChainGeometry::new(self.local_dims.clone())?;
        let window = match &self.window {
            Some(w) => Region::new(w.clone()),
            None => geometry.region_all(),
        };
        let d: usize = geometry.sub_dims(window.sites()).iter().product();
        let mut v = vec![linalg::identity(d); n * n];
        for (key, m) in &self.v {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("boundary unitary key {key:?} is not \"g,h\"")))?;
            let g = element_index(&group, a.trim())?;
            let h = element_index(&group, b.trim())?;
            v[g * n + h] = m.to_matrix()?;
        }
        let mut alpha = vec![Circuit::identity(); n];
        for (key, layers) in &self.alpha {
            alpha[element_index(&group, key)?] = build_circuit(layers, &geometry)?;
        }
        BoundaryCocycleData::from_parts(group, geometry, window, v, alpha)
    }

    pub fn from_data(data: &BoundaryCocycleData) -> Self {
        let g = &data.group;
        let n = g.order();
        let mut v = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                v.insert(format!("{},{}", g.label(a), g.label(b)), MatrixSpec::dense(data.v(a, b)));
            }
        }
        let alpha = (0..n)
            .map(|a| {
                let layers =
                    data.alpha[a].layers().iter().map(|l| l.iter().map(GateSpec::from_operator).collect()).collect();
                (g.label(a).to_string(), layers)
            })
            .collect();
        VDataJson {
            group: g.to_spec(),
            local_dims: data.geometry.local_dims().to_vec(),
            window: Some(data.window.sites().to_vec()),
            v,
            alpha,
        }
    }
}
