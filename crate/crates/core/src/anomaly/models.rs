//! Small reference actions for the anomaly pipeline.

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::named_matrix;
use crate::spin::geometry::ChainGeometry;
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::circuit::Circuit;

/// CZ on every bond `(i, i+1)` in two layers (even bonds, then odd bonds).
/// With `periodic` the bond `(n−1, 0)` is included; `n` must then be even.
pub fn cz_bonds(n: usize, periodic: bool) -> Result<Circuit> {
    if periodic && n % 2 == 1 {
        return Err(Error::InvalidAction(format!("periodic CZ brickwork needs an even ring, got {n}")));
    }
    let cz = named_matrix("CZ").unwrap();
    let bonds = if periodic { n } else { n.saturating_sub(1) };
    let gate = |i: usize| LocalOperator::new(vec![i, (i + 1) % n], vec![2, 2], cz.clone());
    let even = (0..bonds).step_by(2).map(gate).collect::<Result<Vec<_>>>()?;
    let odd = (1..bonds).step_by(2).map(gate).collect::<Result<Vec<_>>>()?;
    Circuit::new(vec![even, odd])
}

/// One layer of CZ on bonds `(i, i+1)` with `i ≡ parity (mod 2)`.
pub fn cz_layer(n: usize, parity: usize) -> Result<Circuit> {
    let cz = named_matrix("CZ").unwrap();
    let gates = (parity % 2..n.saturating_sub(1))
        .step_by(2)
        .map(|i| LocalOperator::new(vec![i, i + 1], vec![2, 2], cz.clone()))
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(vec![gates])
}

/// Z2 generated by `∏ X_i · ∏ CZ_{i,i+1}` on an even ring. Its square is a
/// scalar, yet the half-chain restriction squares to `Z` on the cut, so the
/// 3-cocycle is the nontrivial class of `H³(Z2, U(1))`.
pub fn cz_dressed_flip_ring(n: usize) -> Result<SymmetryAction> {
    let x = named_matrix("X").unwrap();
    let u = cz_bonds(n, true)?.then(&Circuit::on_site(&vec![x; n])?);
    SymmetryAction::circuit(GroupTable::cyclic(2)?, ChainGeometry::qubits(n)?, vec![Circuit::identity(), u], 2, true)
}

/// Z2×Z2 acting by `X` on even sites and `X` on odd sites.
pub fn z2xz2_sublattice(n: usize) -> Result<SymmetryAction> {
    let x = named_matrix("X").unwrap();
    let id = named_matrix("I").unwrap();
    let pick = |even: bool, odd: bool| {
        (0..n)
            .map(|s| if (s % 2 == 0 && even) || (s % 2 == 1 && odd) { x.clone() } else { id.clone() })
            .collect::<Vec<_>>()
    };
    // element (a,b): a flips even sites, b odd sites
    let per = vec![pick(false, false), pick(false, true), pick(true, false), pick(true, true)];
    SymmetryAction::on_site(GroupTable::z2xz2(), ChainGeometry::qubits(n)?, per)
}
