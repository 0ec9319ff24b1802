//! Reference states and the JSON `state` stanza.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, CVector, ZERO};
use crate::random;
use crate::spin::density::{DensityOperator, PureStateVector};
use crate::spin::geometry::ChainGeometry;
use crate::spin::matrix_json::DenseMatrix;

fn plus_vector() -> CVector {
    CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]).unscale(2f64.sqrt())
}

fn minus_vector() -> CVector {
    CVector::from_vec(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]).unscale(2f64.sqrt())
}

/// `|+⟩^⊗N`.
pub fn plus_product_vector(n: usize) -> Result<PureStateVector> {
    let g = ChainGeometry::qubits(n)?;
    PureStateVector::product(g, &vec![plus_vector(); n])
}

pub fn plus_product(n: usize) -> Result<DensityOperator> {
    Ok(plus_product_vector(n)?.to_density())
}

/// `𝕀/2^N`.
pub fn maximally_mixed(n: usize) -> Result<DensityOperator> {
    let g = ChainGeometry::qubits(n)?;
    let d = g.dim();
    Ok(DensityOperator::from_trusted(g, CMatrix::identity(d, d).unscale(d as f64)))
}

/// `(𝕀 + X)/2^N` with `X` the product of all `σ^x`: the projection of `𝕀` onto
/// the even sector of the global flip.
pub fn parity_projected(n: usize) -> Result<DensityOperator> {
    let g = ChainGeometry::qubits(n)?;
    let d = g.dim();
    let w = 1.0 / d as f64;
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] += c64(w, 0.0);
        m[(i, d - 1 - i)] += c64(w, 0.0);
    }
    Ok(DensityOperator::from_trusted(g, m))
}

/// `(p|++⟩⟨++| + (1−p)|−−⟩⟨−−|)^⊗(N/2)`, pairs on sites `(2k, 2k+1)`.
pub fn paired_pm(n: usize, p: f64) -> Result<DensityOperator> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Precondition(format!("paired state needs an even number of sites, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("pair weight p = {p} outside [0, 1]")));
    }
    let pp = plus_vector().kronecker(&plus_vector());
    let mm = minus_vector().kronecker(&minus_vector());
    let pair = (&pp * pp.adjoint()).scale(p) + (&mm * mm.adjoint()).scale(1.0 - p);
    let pair_state = DensityOperator::from_trusted(ChainGeometry::qubits(2)?, pair);
    let mut rho = pair_state.clone();
    for _ in 1..n / 2 {
        rho = DensityOperator::tensor(&rho, &pair_state)?;
    }
    Ok(DensityOperator::from_trusted(ChainGeometry::qubits(n)?, rho.into_matrix()))
}

/// `½(|0…0⟩⟨0…0| + |1…1⟩⟨1…1|)`.
pub fn ghz_mixture(n: usize) -> Result<DensityOperator> {
    let g = ChainGeometry::qubits(n)?;
    let d = g.dim();
    let mut m = CMatrix::zeros(d, d);
    m[(0, 0)] = c64(0.5, 0.0);
    m[(d - 1, d - 1)] = c64(0.5, 0.0);
    Ok(DensityOperator::from_trusted(g, m))
}

/// Computational basis projector; `bits[k]` is the level of site `k`.
pub fn basis(dims: &[usize], bits: &[usize]) -> Result<DensityOperator> {
    if dims.len() != bits.len() {
        return Err(Error::DimensionMismatch("one basis level per site required".into()));
    }
    let g = ChainGeometry::new(dims.to_vec())?;
    let mut idx = 0;
    let mut stride = 1;
    for (k, (&d, &b)) in dims.iter().zip(bits).enumerate() {
        if b >= d {
            return Err(Error::Precondition(format!("level {b} on site {k} of dimension {d}")));
        }
        idx += b * stride;
        stride *= d;
    }
    let dim = g.dim();
    let mut m = CMatrix::from_element(dim, dim, ZERO);
    m[(idx, idx)] = c64(1.0, 0.0);
    Ok(DensityOperator::from_trusted(g, m))
}

pub fn random_state(dims: &[usize], rank: usize, seed: u64) -> Result<DensityOperator> {
    let g = ChainGeometry::new(dims.to_vec())?;
    let m = random::random_density_matrix(&mut random::rng(seed), g.dim(), rank);
    Ok(DensityOperator::from_trusted(g, m))
}

/// `{"kind": ..., "params": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateSpec {
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

impl StateSpec {
    pub fn new(kind: &str, params: Value) -> Self {
        StateSpec { kind: kind.to_string(), params }
    }

    fn param_f64(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(Value::as_f64)
    }

    fn param_usize(&self, key: &str) -> Option<usize> {
        self.params.get(key).and_then(Value::as_u64).map(|v| v as usize)
    }

    /// Build the state. `num_sites` comes from the enclosing chain and may be
    /// overridden by `params.num_sites`.
    pub fn build(&self, num_sites: Option<usize>, seed: u64) -> Result<DensityOperator> {
        let n = self
            .param_usize("num_sites")
            .or(num_sites)
            .ok_or_else(|| Error::Scenario(format!("state {:?} needs num_sites", self.kind)));
        match self.kind.as_str() {
            "plus_product" => plus_product(n?),
            "maximally_mixed" => maximally_mixed(n?),
            "parity_projected" => parity_projected(n?),
            "paired_pm" => {
                let p = self.param_f64("p").ok_or_else(|| Error::Scenario("paired_pm needs params.p".into()))?;
                paired_pm(n?, p)
            }
            "ghz_mixture" => ghz_mixture(n?),
            "basis" => {
                let bits: Vec<usize> = serde_json::from_value(
                    self.params
                        .get("bits")
                        .cloned()
                        .ok_or_else(|| Error::Scenario("basis needs params.bits".into()))?,
                )?;
                let d = self.param_usize("local_dim").unwrap_or(2);
                basis(&vec![d; bits.len()], &bits)
            }
            "random" => {
                let n = n?;
                let d = self.param_usize("local_dim").unwrap_or(2);
                let rank = self.param_usize("rank").unwrap_or(usize::MAX);
                let seed = self.params.get("seed").and_then(Value::as_u64).unwrap_or(seed);
                let dim = d.pow(n as u32);
                random_state(&vec![d; n], rank.min(dim), seed)
            }
            "custom_matrix" => {
                let m: DenseMatrix = serde_json::from_value(
                    self.params
                        .get("matrix")
                        .cloned()
                        .ok_or_else(|| Error::Scenario("custom_matrix needs params.matrix".into()))?,
                )?;
                let m = m.to_matrix()?;
                let dims: Vec<usize> = match self.params.get("local_dims") {
                    Some(v) => serde_json::from_value(v.clone())?,
                    None => {
                        let d = self.param_usize("local_dim").unwrap_or(2);
                        let mut n = 0;
                        let mut total = 1;
                        while total < m.nrows() {
                            total *= d;
                            n += 1;
                        }
                        vec![d; n]
                    }
                };
                let g = ChainGeometry::new(dims)?;
                DensityOperator::new(g, m)
            }
            other => Err(Error::Scenario(format!("unknown state kind {other:?}"))),
        }
    }
}
