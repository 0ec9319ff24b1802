use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{self, CMatrix};
use crate::spin::geometry::{ChainGeometry, Region};
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::circuit::Circuit;

const AGREEMENT_TOL: f64 = 1e-10;

/// Right-half truncation `α^R` of a symmetry action.
///
/// Sites `cut..N` of the parent chain become sites `0..L` here. Gates fully
/// inside `[cut, N)` are kept; for periodic actions gates that wrap around
/// the ring are dropped as well.
#[derive(Clone, Debug)]
pub struct HalfChainAction {
    group: GroupTable,
    cut: usize,
    radius: usize,
    periodic: bool,
    geometry: ChainGeometry,
    circuits: Vec<Circuit>,
    window: Region,
}

fn wraps(sites: &[usize], n: usize) -> bool {
    let (lo, hi) = (sites[0], sites[sites.len() - 1]);
    // an arc shorter than hi − lo exists only through the seam
    sites.windows(2).any(|w| n - (w[1] - w[0]) < hi - lo)
}

/// Truncate `action` to the right of `cut`. The boundary window covers
/// `max(2r, 1) + extra` sites next to the cut.
pub fn half_chain_restrict(action: &SymmetryAction, cut: usize, extra: usize) -> Result<HalfChainAction> {
    half_chain_restrict_with_width(action, cut, (2 * action.radius()).max(1) + extra)
}

/// As [`half_chain_restrict`] with an explicit window width. Declared radii
/// are upper bounds, so a narrower window can suffice; if it does not, the
/// boundary reconstruction reports `NotInner`.
pub fn half_chain_restrict_with_width(action: &SymmetryAction, cut: usize, width: usize) -> Result<HalfChainAction> {
    let n = action.geometry().num_sites();
    let r = action.radius();
    let periodic = action.is_periodic();
    if cut >= n {
        return Err(Error::HalfChain(format!("cut {cut} outside a {n}-site chain")));
    }
    if width == 0 {
        return Err(Error::HalfChain("empty boundary window".into()));
    }
    let len = n - cut;
    // the window and its light cone must stay clear of the far end
    let far = if periodic { 2 * r } else { 0 };
    if width + r + far > len {
        return Err(Error::HalfChain(format!(
            "half chain of {len} sites too short for a {width}-site window at radius {r}"
        )));
    }
    let keep = |g: &LocalOperator| {
        let s = g.support().sites();
        s[0] >= cut && !(periodic && wraps(s, n))
    };
    let circuits =
        action.circuits().iter().map(|c| c.filtered(keep).remapped(|s| s - cut)).collect::<Result<Vec<_>>>()?;
    let geometry = ChainGeometry::new(action.geometry().local_dims()[cut..].to_vec())?;
    let half = HalfChainAction {
        group: action.group().clone(),
        cut,
        radius: r,
        periodic,
        geometry,
        circuits,
        window: Region::interval(0, width),
    };
    half.check_interior(action)?;
    Ok(half)
}

impl HalfChainAction {
    /// `α^R_g` agrees with `α_g` on single-site matrix units at distance ≥ r
    /// from the cut (and from the seam, for rings).
    fn check_interior(&self, action: &SymmetryAction) -> Result<()> {
        let len = self.geometry.num_sites();
        let hi = if self.periodic { len - self.radius } else { len };
        for s in self.radius..hi {
            let d = self.geometry.local_dim(s);
            for i in 0..d {
                for j in 0..d {
                    let mut m = CMatrix::zeros(d, d);
                    m[(i, j)] = linalg::ONE;
                    let a = LocalOperator::single(s, m)?;
                    for g in 0..self.group.order() {
                        let full = action.circuit_of(g).conjugate_local(&a.translated(self.cut as isize)?)?;
                        let trunc = self.circuits[g].conjugate_local(&a)?.translated(self.cut as isize)?;
                        let dev = full.distance(&trunc)?;
                        if dev > AGREEMENT_TOL {
                            return Err(Error::HalfChain(format!(
                                "truncated action of {} differs from the full one at site {} (deviation {dev:e})",
                                self.group.label(g),
                                s + self.cut
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn circuit_of(&self, g: usize) -> &Circuit {
        &self.circuits[g]
    }

    pub fn window(&self) -> &Region {
        &self.window
    }

    /// `α^R_g(a)`.
    pub fn apply(&self, g: usize, a: &LocalOperator) -> Result<LocalOperator> {
        self.circuits[g].conjugate_local(a)
    }

    /// Circuit of `U^R_g U^R_h (U^R_{gh})†`.
    pub fn defect_circuit(&self, g: usize, h: usize) -> Circuit {
        let gh = self.group.mul(g, h);
        self.circuits[gh].adjoint().then(&self.circuits[h]).then(&self.circuits[g])
    }

    /// `β_{g,h} = α^R_g α^R_h (α^R_{gh})⁻¹`.
    pub fn defect_map(&self, g: usize, h: usize, a: &LocalOperator) -> Result<LocalOperator> {
        let gh = self.group.mul(g, h);
        let back = self.circuits[gh].adjoint().conjugate_local(a)?;
        self.circuits[g].conjugate_local(&self.circuits[h].conjugate_local(&back)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::named_matrix;

    #[test]
    fn seam_detection() {
        assert!(wraps(&[0, 5], 6));
        assert!(!wraps(&[2, 3], 6));
        assert!(wraps(&[0, 1, 5], 6));
    }

    #[test]
    fn on_site_flip_keeps_right_factors() {
        let a = SymmetryAction::z2_flip(6).unwrap();
        let h = half_chain_restrict(&a, 2, 0).unwrap();
        assert_eq!(h.geometry().num_sites(), 4);
        assert_eq!(h.circuit_of(1).gates().count(), 4);
    }

    #[test]
    fn cz_straddling_the_cut_is_dropped() {
        let n = 10;
        let cz = named_matrix("CZ").unwrap();
        let x = named_matrix("X").unwrap();
        let w = Circuit::new(vec![(0..n / 2)
            .take(n / 2 - 1)
            .map(|k| LocalOperator::new(vec![2 * k + 1, 2 * k + 2], vec![2, 2], cz.clone()).unwrap())
            .collect()])
        .unwrap();
        let flip = Circuit::on_site(&vec![x; n]).unwrap();
        let g = GroupTable::cyclic(2).unwrap();
        let act = SymmetryAction::circuit(
            g,
            ChainGeometry::qubits(n).unwrap(),
            vec![Circuit::identity(), w.adjoint().then(&flip).then(&w)],
            2,
            false,
        )
        .unwrap();
        // gate on (1,2) straddles the cut at 2
        let h = half_chain_restrict(&act, 2, 0).unwrap();
        assert_eq!(h.circuit_of(1).gates().filter(|g| g.support().len() == 2).count(), 6);
    }
}
