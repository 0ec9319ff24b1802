//! JSON `channel` stanza.
//!
//! ```json
//! {"bath": {"num_sites": 1}, "bath_state": {"kind": "plus_product"},
//!  "gates": [{"kind": "CZ", "sites": [0, 2]}, {"kind": "CZ", "sites": [1, 2]}]}
//! {"preset": "cluster_dephasing", "layout": "periodic"}
//! ```
//! Gate sites number the joint chain: system first, then bath. Each listed
//! gate is applied in order; `"unitary"` gives a dense joint matrix instead.

use serde::{Deserialize, Serialize};

use crate::channels::channel::{BathState, Channel, JointUnitary};
use crate::channels::cluster::{cluster_dephasing_channel_with, dephasing_channel, ClusterBath};
use crate::error::{Error, Result};
use crate::spin::geometry::ChainGeometry;
use crate::spin::matrix_json::MatrixSpec;
use crate::spin::states::StateSpec;
use crate::symmetry::circuit::Circuit;
use crate::symmetry::spec::GateSpec;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct BathSpec {
    #[serde(default)]
    pub local_dims: Option<Vec<usize>>,
    #[serde(default)]
    pub num_sites: Option<usize>,
    #[serde(default)]
    pub local_dim: Option<usize>,
}

impl BathSpec {
    fn build(&self) -> Result<ChainGeometry> {
        match (&self.local_dims, self.num_sites) {
            (Some(d), _) => ChainGeometry::new(d.clone()),
            (None, Some(n)) => ChainGeometry::uniform(n, self.local_dim.unwrap_or(2)),
            (None, None) => Err(Error::Scenario("bath needs local_dims or num_sites".into())),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    /// `"identity"`, `"cluster_dephasing"` or `"dephasing"`.
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub layout: Option<ClusterBath>,
    /// Dephasing preset: site and strength.
    #[serde(default)]
    pub site: Option<usize>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub bath: Option<BathSpec>,
    #[serde(default)]
    pub bath_state: Option<StateSpec>,
    #[serde(default)]
    pub gates: Vec<GateSpec>,
    #[serde(default)]
    pub unitary: Option<MatrixSpec>,
}

impl ChannelSpec {
    pub fn build(&self, system: &ChainGeometry, seed: u64) -> Result<Channel> {
        if let Some(preset) = &self.preset {
            return match preset.as_str() {
                "identity" => Channel::identity(system.clone()),
                "cluster_dephasing" => {
                    if system.local_dims().iter().any(|&d| d != 2) {
                        return Err(Error::Scenario("cluster_dephasing needs a qubit chain".into()));
                    }
                    cluster_dephasing_channel_with(system.num_sites(), self.layout.unwrap_or_default())
                }
                "dephasing" => dephasing_channel(
                    system.clone(),
                    self.site.unwrap_or(0),
                    self.p.ok_or_else(|| Error::Scenario("dephasing needs p".into()))?,
                ),
                other => Err(Error::Scenario(format!("unknown channel preset {other:?}"))),
            };
        }
        let bath_geo =
            self.bath.as_ref().ok_or_else(|| Error::Scenario("channel needs a bath or a preset".into()))?.build()?;
        let phi = self
            .bath_state
            .as_ref()
            .ok_or_else(|| Error::Scenario("channel needs bath_state".into()))?
            .build(Some(bath_geo.num_sites()), seed)?;
        if phi.geometry().local_dims() != bath_geo.local_dims() {
            return Err(Error::Scenario(format!(
                "bath state on {:?}, bath declared as {:?}",
                phi.geometry().local_dims(),
                bath_geo.local_dims()
            )));
        }
        let joint = system.concat(&bath_geo)?;
        let unitary = match (&self.unitary, self.gates.is_empty()) {
            (Some(_), false) => return Err(Error::Scenario("give either gates or unitary, not both".into())),
            (Some(m), true) => JointUnitary::Matrix(m.to_matrix()?),
            (None, _) => {
                let layers = self.gates.iter().map(|g| Ok(vec![g.build(&joint)?])).collect::<Result<Vec<_>>>()?;
                JointUnitary::Gates(Circuit::new(layers)?)
            }
        };
        Channel::new(system.clone(), BathState::from_density(phi)?, unitary)
    }
}
