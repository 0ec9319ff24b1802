//! Canonical purification `|√ρ⟩⟩` and correlators in it.
//!
//! Layout on the doubled chain: the conjugate copy occupies sites `0..N`,
//! the original chain sites `N..2N`, and amplitude `a + D·b` equals
//! `√ρ[b, a]` (`a` labels the copy, `b` the original).

use crate::diagnostics::report::{DiagnosticReport, Thresholds};
use crate::error::{Error, Result};
use crate::linalg::{self, CVector, C64};
use crate::spin::density::{DensityOperator, PureStateVector};
use crate::spin::geometry::{ChainGeometry, Region};
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;

pub const SQRT_CLIP: f64 = 1e-14;

pub fn doubled_geometry(g: &ChainGeometry) -> Result<ChainGeometry> {
    g.concat(g)
}

pub fn canonical_purification(rho: &DensityOperator) -> Result<PureStateVector> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(tr));
    }
    let geometry = doubled_geometry(rho.geometry())?;
    let d = rho.dim();
    // eigenvalue noise of order 1e-17 would otherwise enter as 1e-9 amplitudes
    let s = linalg::psd_sqrt(rho.matrix(), SQRT_CLIP * tr);
    // row-major flatten of √ρ
    let v = CVector::from_fn(d * d, |k, _| {
        let (a, b) = (k % d, k / d);
        s[(b, a)]
    });
    PureStateVector::normalize(geometry, v)
}

/// Original-chain sites of the purification.
pub fn original_region(n: usize) -> Region {
    Region::new((n..2 * n).collect())
}

/// `Ō ⊗ O`: entrywise conjugate on the copy, `O` on the original.
pub fn doubled_operator(op: &LocalOperator, n: usize) -> Result<LocalOperator> {
    let copy = op.conj();
    let orig = op.remap(|s| s + n)?;
    copy.mul(&orig)
}

struct Twirl {
    geometry: ChainGeometry,
    branches: Vec<CVector>,
}

impl Twirl {
    /// `(1 ⊗ U_g)|Ψ⟩` for every group element.
    fn new(psi: &PureStateVector, action: &SymmetryAction, n: usize) -> Result<Self> {
        let geometry = psi.geometry().clone();
        let branches = (0..action.group().order())
            .map(|g| action.embedded_circuit(g, |s| s + n)?.apply_to_vector(&geometry, psi.amplitudes()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Twirl { geometry, branches })
    }

    fn untwirled(psi: &PureStateVector) -> Self {
        Twirl { geometry: psi.geometry().clone(), branches: vec![psi.amplitudes().clone()] }
    }

    fn expect(&self, op: &LocalOperator) -> Result<C64> {
        let mut s = linalg::ZERO;
        for v in &self.branches {
            s += v.dotc(&op.apply_to_vector(&self.geometry, v)?);
        }
        Ok(s / C64::from(self.branches.len() as f64))
    }

    fn connected(&self, a: &LocalOperator, b: &LocalOperator) -> Result<f64> {
        let ab = self.expect(&a.mul(b)?)?;
        Ok((ab - self.expect(a)? * self.expect(b)?).norm())
    }
}

/// Connected `⟨D(x)D(x+d)⟩` with `D = Ō ⊗ O`, evaluated in the
/// symmetry-twirled purification `(1/|G|) Σ_g (1⊗U_g)|Ψ⟩⟨Ψ|(1⊗U_g)†`.
///
/// The twirl restores the weak symmetry of the doubled state, so `⟨D⟩ = 0`
/// for charged `O`. Untwirled values are kept in `series["untwirled"]`.
pub fn purification_clustering_scan(
    rho: &DensityOperator,
    op: &LocalOperator,
    distances: &[usize],
    action: &SymmetryAction,
    thresholds: Thresholds,
) -> Result<DiagnosticReport> {
    let n = rho.geometry().num_sites();
    let hi = op.support().max().unwrap_or(0);
    for &d in distances {
        if d == 0 || hi + d >= n {
            return Err(Error::InvalidSchedule(format!(
                "distance {d} from support {:?} leaves the {n}-site chain",
                op.support().sites()
            )));
        }
    }
    let psi = canonical_purification(rho)?;
    let twirl = Twirl::new(&psi, action, n)?;
    let plain = Twirl::untwirled(&psi);
    let dx = doubled_operator(op, n)?;
    let mut values = Vec::new();
    let mut untwirled = Vec::new();
    for &d in distances {
        let dy = doubled_operator(&op.translated(d as isize)?, n)?;
        values.push(twirl.connected(&dx, &dy)?);
        untwirled.push(plain.connected(&dx, &dy)?);
    }
    Ok(DiagnosticReport::new("purification_clustering", "distance", distances.to_vec(), values, thresholds)
        .with_series("untwirled", untwirled)
        .with_convention("purification", "vec(sqrt(rho)); conjugate copy on sites 0..N, original on N..2N")
        .with_convention("order_parameter", "conj(O) on copy times O on original")
        .with_convention("state", "symmetry-twirled purification"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::states;

    #[test]
    fn restriction_round_trip() {
        let rho = states::random_state(&[2, 2], 3, 9).unwrap();
        let psi = canonical_purification(&rho).unwrap();
        let back = psi.restrict(&original_region(2)).unwrap();
        assert!(linalg::max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn mixed_qubit_gives_bell_pair() {
        let psi = canonical_purification(&states::maximally_mixed(1).unwrap()).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let amps: Vec<f64> = psi.amplitudes().iter().map(|z| z.re).collect();
        assert!((amps[0] - h).abs() < 1e-15 && amps[1].abs() < 1e-15 && amps[2].abs() < 1e-15);
        assert!((amps[3] - h).abs() < 1e-15);
    }

    #[test]
    fn order_in_mixed_state_only() {
        let n = 4;
        let a = SymmetryAction::z2_flip(n).unwrap();
        let z = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
        let r1 =
            purification_clustering_scan(&states::maximally_mixed(n).unwrap(), &z, &[1, 3], &a, Thresholds::default())
                .unwrap();
        assert!(r1.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let p = purification_clustering_scan(&states::plus_product(n).unwrap(), &z, &[1, 3], &a, Thresholds::default())
            .unwrap();
        assert!(p.values.iter().all(|v| v.abs() < 1e-12));
    }
}
