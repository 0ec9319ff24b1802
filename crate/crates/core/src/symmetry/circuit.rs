use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::spin::geometry::{ChainGeometry, Region};
use crate::spin::operator::LocalOperator;

/// Ordered layers of gates; gates within a layer act on disjoint sites.
///
/// The unitary is `U = L_k ⋯ L_1`: layer 0 acts first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    layers: Vec<Vec<LocalOperator>>,
}

impl Circuit {
    pub fn new(layers: Vec<Vec<LocalOperator>>) -> Result<Self> {
        for (l, layer) in layers.iter().enumerate() {
            for (i, a) in layer.iter().enumerate() {
                let defect = linalg::unitarity_defect(a.matrix());
                if defect > 1e-10 {
                    return Err(Error::NotUnitary(defect));
                }
                for b in &layer[i + 1..] {
                    if a.support().sites().iter().any(|&s| b.support().contains(s)) {
                        return Err(Error::InvalidAction(format!(
                            "gates on {:?} and {:?} overlap in layer {l}",
                            a.support().sites(),
                            b.support().sites()
                        )));
                    }
                }
            }
        }
        Ok(Circuit { layers })
    }

    pub fn identity() -> Self {
        Circuit { layers: Vec::new() }
    }

    /// One layer of single-site unitaries, `unitaries[s]` on site `s`.
    pub fn on_site(unitaries: &[CMatrix]) -> Result<Self> {
        let layer = unitaries
            .iter()
            .enumerate()
            .map(|(s, u)| LocalOperator::single(s, u.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vec![layer])
    }

    pub fn layers(&self) -> &[Vec<LocalOperator>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gates(&self) -> impl Iterator<Item = &LocalOperator> {
        self.layers.iter().flatten()
    }

    /// Sites touched by any gate.
    pub fn sites(&self) -> Region {
        Region::new(self.gates().flat_map(|g| g.support().sites().to_vec()).collect())
    }

    /// Inverse circuit: reversed layers, adjoint gates.
    pub fn adjoint(&self) -> Circuit {
        Circuit { layers: self.layers.iter().rev().map(|l| l.iter().map(LocalOperator::adjoint).collect()).collect() }
    }

    /// `self` first, then `next`; the unitary is `U_next · U_self`.
    pub fn then(&self, next: &Circuit) -> Circuit {
        let mut layers = self.layers.clone();
        layers.extend(next.layers.iter().cloned());
        Circuit { layers }
    }

    /// Keep only the gates accepted by `keep`; drop empty layers.
    pub fn filtered(&self, keep: impl Fn(&LocalOperator) -> bool) -> Circuit {
        Circuit {
            layers: self
                .layers
                .iter()
                .map(|l| l.iter().filter(|g| keep(g)).cloned().collect::<Vec<_>>())
                .filter(|l| !l.is_empty())
                .collect(),
        }
    }

    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        let layers = self
            .layers
            .iter()
            .map(|l| l.iter().map(|g| g.remap(&map)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit { layers })
    }

    /// Light-cone growth per side. With `ring = Some(n)` distances wrap.
    pub fn light_cone_radius(&self, ring: Option<usize>) -> usize {
        self.layers.iter().map(|layer| layer.iter().map(|g| span(g.support().sites(), ring)).max().unwrap_or(0)).sum()
    }

    /// `U O U†` with exact light-cone tracking.
    pub fn conjugate_local(&self, op: &LocalOperator) -> Result<LocalOperator> {
        let mut out = op.clone();
        for layer in &self.layers {
            for gate in layer {
                if gate.support().sites().iter().any(|&s| out.support().contains(s)) {
                    out = out.conjugated_by(gate)?;
                }
            }
        }
        Ok(out)
    }

    /// `U m` for a full-chain matrix.
    pub fn apply_left(&self, geometry: &ChainGeometry, m: &CMatrix) -> Result<CMatrix> {
        let mut out = m.clone();
        for gate in self.gates() {
            out = gate.apply_left(geometry, &out)?;
        }
        Ok(out)
    }

    /// `U m U†` for a full-chain matrix.
    pub fn conjugate_matrix(&self, geometry: &ChainGeometry, m: &CMatrix) -> Result<CMatrix> {
        let mut out = m.clone();
        for gate in self.gates() {
            out = gate.conjugate(geometry, &out)?;
        }
        Ok(out)
    }

    pub fn apply_to_vector(&self, geometry: &ChainGeometry, v: &CVector) -> Result<CVector> {
        let mut out = v.clone();
        for gate in self.gates() {
            out = gate.apply_to_vector(geometry, &out)?;
        }
        Ok(out)
    }

    pub fn unitary(&self, geometry: &ChainGeometry) -> Result<CMatrix> {
        let d = geometry.dim();
        self.apply_left(geometry, &CMatrix::identity(d, d))
    }
}

fn span(sites: &[usize], ring: Option<usize>) -> usize {
    let (Some(&lo), Some(&hi)) = (sites.first(), sites.last()) else {
        return 0;
    };
    match ring {
        None => hi - lo,
        Some(n) => {
            // smallest arc containing all sites
            let mut best = hi - lo;
            for w in sites.windows(2) {
                let gap = w[1] - w[0];
                best = best.min(n - gap);
            }
            best
        }
    }
}
