//! JSON `symmetry` stanza.
//!
//! ```json
//! {"group": "Z2",
//!  "realization": {"kind": "onsite", "unitaries": {"1": "X"}}}
//! {"group": "Z2",
//!  "realization": {"kind": "circuit", "radius": 1, "periodic": true,
//!                  "layers": {"1": [[{"kind": "CZ", "sites": [0, 1]}]]}}}
//! ```
//! Elements are keyed by label or index; missing elements act trivially.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupTable};
use crate::linalg;
use crate::spin::geometry::ChainGeometry;
use crate::spin::matrix_json::MatrixSpec;
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::circuit::Circuit;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GateSpec {
    #[serde(alias = "matrix")]
    pub kind: MatrixSpec,
    pub sites: Vec<usize>,
}

impl GateSpec {
    pub fn build(&self, geometry: &ChainGeometry) -> Result<LocalOperator> {
        for &s in &self.sites {
            if s >= geometry.num_sites() {
                return Err(Error::Scenario(format!("gate site {s} outside a {}-site chain", geometry.num_sites())));
            }
        }
        let dims = geometry.sub_dims(&self.sites);
        LocalOperator::new(self.sites.clone(), dims, self.kind.to_matrix()?)
    }

    pub fn from_operator(op: &LocalOperator) -> Self {
        GateSpec { kind: MatrixSpec::dense(op.matrix()), sites: op.support().sites().to_vec() }
    }
}

pub fn build_circuit(layers: &[Vec<GateSpec>], geometry: &ChainGeometry) -> Result<Circuit> {
    let layers = layers
        .iter()
        .map(|l| l.iter().map(|g| g.build(geometry)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(layers)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SiteUnitaries {
    Uniform(MatrixSpec),
    PerSite(Vec<MatrixSpec>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RealizationSpec {
    Onsite {
        unitaries: BTreeMap<String, SiteUnitaries>,
    },
    Circuit {
        layers: BTreeMap<String, Vec<Vec<GateSpec>>>,
        radius: usize,
        #[serde(default)]
        periodic: bool,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SymmetrySpec {
    pub group: GroupSpec,
    pub realization: RealizationSpec,
    #[serde(default)]
    pub translation_covariant: bool,
}

pub(crate) fn element_index(group: &GroupTable, key: &str) -> Result<usize> {
    if let Some(i) = group.index_of(key) {
        return Ok(i);
    }
    key.parse::<usize>()
        .ok()
        .filter(|&i| i < group.order())
        .ok_or_else(|| Error::Scenario(format!("unknown group element {key:?} in {}", group.name())))
}

impl SymmetrySpec {
    /// The Z2 flip `∏ σ^x`.
    pub fn z2_flip() -> Self {
        SymmetrySpec {
            group: GroupSpec::Name("Z2".into()),
            realization: RealizationSpec::Onsite {
                unitaries: BTreeMap::from([("1".to_string(), SiteUnitaries::Uniform(MatrixSpec::Named("X".into())))]),
            },
            translation_covariant: true,
        }
    }

    pub fn build(&self, geometry: &ChainGeometry) -> Result<SymmetryAction> {
        let group = self.group.build()?;
        let n = group.order();
        let action = match &self.realization {
            RealizationSpec::Onsite { unitaries } => {
                let mut per: Vec<Vec<_>> =
                    (0..n).map(|_| geometry.local_dims().iter().map(|&d| linalg::identity(d)).collect()).collect();
                for (key, u) in unitaries {
                    let g = element_index(&group, key)?;
                    per[g] = match u {
                        SiteUnitaries::Uniform(m) => vec![m.to_matrix()?; geometry.num_sites()],
                        SiteUnitaries::PerSite(ms) => ms.iter().map(MatrixSpec::to_matrix).collect::<Result<_>>()?,
                    };
                }
                SymmetryAction::on_site(group, geometry.clone(), per)?
            }
            RealizationSpec::Circuit { layers, radius, periodic } => {
                let mut circuits = vec![Circuit::identity(); n];
                for (key, l) in layers {
                    circuits[element_index(&group, key)?] = build_circuit(l, geometry)?;
                }
                SymmetryAction::circuit(group, geometry.clone(), circuits, *radius, *periodic)?
            }
        };
        Ok(action.with_translation_covariant(self.translation_covariant))
    }
}
