//! Exact trivialization of cocycles: solve `δη = c` in `Q/Z`.
//!
//! The integer matrix `M` of `δ: Cⁿ⁻¹ → Cⁿ` is brought to diagonal form
//! `P M Q = D` with unimodular `P`, `Q`. With `c = v/q`, a solution exists iff
//! `(Pv)_i ≡ 0 (mod q)` on the zero rows of `D`; then `y_i = (Pv)_i / (q d_i)`
//! and `η = Q y mod 1`.

use crate::cohomology::cochain::{coboundary, coboundary_terms, is_cocycle, Cochain};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::phase::Phase;

fn checked_axpy(dst: &mut [i128], src: &[i128], k: i128) -> Result<()> {
    if k == 0 {
        return Ok(());
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = s.checked_mul(k).and_then(|t| d.checked_sub(t)).ok_or(Error::Overflow)?;
    }
    Ok(())
}

/// Reusable factorization of `δ` from degree `n − 1` to degree `n`.
#[derive(Clone, Debug)]
pub struct CoboundarySolver {
    group: GroupTable,
    degree: usize,
    rows: usize,
    cols: usize,
    /// `P`, row-major `rows × rows`.
    p: Vec<Vec<i128>>,
    /// `Q`, stored by columns: `q_cols[j]` is column `j`.
    q_cols: Vec<Vec<i128>>,
    diag: Vec<i128>,
}

impl CoboundarySolver {
    /// Factor `δ` into degree `degree` (≥ 1).
    pub fn new(group: &GroupTable, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::CochainMismatch("coboundaries start in degree 1".into()));
        }
        let n = group.order();
        let rows = n.pow(degree as u32);
        let cols = n.pow(degree as u32 - 1);
        let shape = Cochain::zero(group, degree);
        let mut a = vec![vec![0i128; cols]; rows];
        for (r, row) in a.iter_mut().enumerate() {
            for (s, j) in coboundary_terms(group, degree - 1, &shape.args(r)) {
                row[j] += s as i128;
            }
        }
        let mut p: Vec<Vec<i128>> = (0..rows)
            .map(|i| {
                let mut r = vec![0; rows];
                r[i] = 1;
                r
            })
            .collect();
        let mut q_cols: Vec<Vec<i128>> = (0..cols)
            .map(|j| {
                let mut c = vec![0; cols];
                c[j] = 1;
                c
            })
            .collect();
        let mut diag = Vec::new();
        for t in 0..rows.min(cols) {
            // smallest nonzero entry of the remaining block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            p.swap(t, bi);
            swap_cols(&mut a, t, bj);
            q_cols.swap(t, bj);
            loop {
                let piv = a[t][t];
                let mut dirty = false;
                for i in t + 1..rows {
                    let k = a[i][t].div_euclid(piv);
                    if k != 0 {
                        let (top, rest) = a.split_at_mut(i);
                        checked_axpy(&mut rest[0], &top[t], k)?;
                        let (ptop, prest) = p.split_at_mut(i);
                        checked_axpy(&mut prest[0], &ptop[t], k)?;
                    }
                    dirty |= a[i][t] != 0;
                }
                for j in t + 1..cols {
                    let k = a[t][j].div_euclid(piv);
                    if k != 0 {
                        for row in a.iter_mut() {
                            row[j] =
                                row[t].checked_mul(k).and_then(|x| row[j].checked_sub(x)).ok_or(Error::Overflow)?;
                        }
                        let (l, r) = q_cols.split_at_mut(j);
                        checked_axpy(&mut r[0], &l[t], k)?;
                    }
                    dirty |= a[t][j] != 0;
                }
                if !dirty {
                    break;
                }
                // a remainder smaller than the pivot survived; promote it
                let mut m = (t, t);
                for i in t + 1..rows {
                    if a[i][t] != 0 && a[i][t].abs() < a[m.0][m.1].abs() {
                        m = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if a[t][j] != 0 && a[t][j].abs() < a[m.0][m.1].abs() {
                        m = (t, j);
                    }
                }
                if m.0 != t {
                    a.swap(t, m.0);
                    p.swap(t, m.0);
                } else if m.1 != t {
                    swap_cols(&mut a, t, m.1);
                    q_cols.swap(t, m.1);
                }
            }
            diag.push(a[t][t]);
        }
        Ok(CoboundarySolver { group: group.clone(), degree, rows, cols, p, q_cols, diag })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Nonzero diagonal entries of `D` (up to sign).
    pub fn invariant_factors(&self) -> Vec<u128> {
        self.diag.iter().map(|d| d.unsigned_abs()).collect()
    }

    /// `η` with `δη = c`, or `None` when `c` represents a nontrivial class.
    pub fn solve(&self, c: &Cochain) -> Result<Option<Cochain>> {
        if c.degree() != self.degree || c.group() != &self.group {
            return Err(Error::CochainMismatch(format!(
                "solver for degree {} over {}, got degree {} over {}",
                self.degree,
                self.group.name(),
                c.degree(),
                c.group().name()
            )));
        }
        if !is_cocycle(c) {
            return Err(Error::NotCocycle);
        }
        let q = c.common_denominator() as i128;
        let v: Vec<i128> = c.values().iter().map(|p| p.num() as i128 * (q / p.den() as i128)).collect();
        let mut pv = vec![0i128; self.rows];
        for (i, row) in self.p.iter().enumerate() {
            let mut s = 0i128;
            for (a, b) in row.iter().zip(&v) {
                if *a != 0 {
                    s = a.checked_mul(*b).and_then(|t| s.checked_add(t)).ok_or(Error::Overflow)?;
                }
            }
            pv[i] = s.rem_euclid(q);
        }
        if pv[self.rank()..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        // y_i = pv_i / (q d_i), then η = Q y
        let mut eta = vec![Phase::ZERO; self.cols];
        for (i, &d) in self.diag.iter().enumerate() {
            if pv[i] == 0 {
                continue;
            }
            let den = q.checked_mul(d.abs()).ok_or(Error::Overflow)?;
            let num = if d < 0 { -pv[i] } else { pv[i] };
            let den64 = i64::try_from(den).map_err(|_| Error::Overflow)?;
            let y = Phase::new(i64::try_from(num.rem_euclid(den)).map_err(|_| Error::Overflow)?, den64);
            for (e, &qij) in eta.iter_mut().zip(&self.q_cols[i]) {
                if qij != 0 {
                    let k = i64::try_from(qij.rem_euclid(den)).map_err(|_| Error::Overflow)?;
                    *e += y.scale(k);
                }
            }
        }
        let eta = Cochain::from_values(&self.group, self.degree - 1, eta)?;
        if coboundary(&eta) != *c {
            return Err(Error::CrossCheck(format!("degree-{} trivialization failed verification", self.degree)));
        }
        Ok(Some(eta))
    }
}

fn swap_cols(a: &mut [Vec<i128>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// One-shot `is_coboundary`.
pub fn is_coboundary(c: &Cochain) -> Result<Option<Cochain>> {
    CoboundarySolver::new(c.group(), c.degree())?.solve(c)
}

/// `c1 − c2` is a coboundary.
pub fn same_class(c1: &Cochain, c2: &Cochain) -> Result<bool> {
    if !is_cocycle(c1) || !is_cocycle(c2) {
        return Err(Error::NotCocycle);
    }
    Ok(is_coboundary(&c1.sub(c2)?)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_trivial_with_zero_witness() {
        let g = GroupTable::z2xz2();
        let eta = is_coboundary(&Cochain::zero(&g, 2)).unwrap().unwrap();
        assert!(eta.is_zero());
    }

    #[test]
    fn h2_of_cyclic_is_trivial() {
        // every 2-cocycle of a cyclic group is a coboundary
        let g = GroupTable::cyclic(4).unwrap();
        let c = Cochain::from_fn(&g, 2, |a| if a[0] + a[1] >= 4 { Phase::new(1, 4) } else { Phase::ZERO });
        assert!(is_cocycle(&c));
        assert!(is_coboundary(&c).unwrap().is_some());
    }

    #[test]
    fn h3_of_z2_is_nontrivial() {
        // ω(a,b,c) = a b c / 2 generates H³(Z2) = Z2
        let g = GroupTable::cyclic(2).unwrap();
        let w = Cochain::from_fn(&g, 3, |a| Phase::new((a[0] * a[1] * a[2]) as i64, 2));
        assert!(is_cocycle(&w));
        assert!(is_coboundary(&w).unwrap().is_none());
        // over Z4 the generator a(b+c−[b+c])/16 has order 4
        let z4 = GroupTable::cyclic(4).unwrap();
        let gen = Cochain::from_fn(&z4, 3, |a| {
            let carry = (a[1] + a[2]) / 4;
            Phase::new((a[0] * carry * 4) as i64, 16)
        });
        assert!(is_cocycle(&gen));
        for k in 1..4 {
            let kg = Cochain::from_fn(&z4, 3, |a| gen.get(a).scale(k));
            assert!(is_coboundary(&kg).unwrap().is_none(), "{k}·gen trivial");
        }
        let four = Cochain::from_fn(&z4, 3, |a| gen.get(a).scale(4));
        assert!(is_coboundary(&four).unwrap().is_some());
    }

    #[test]
    fn rejects_non_cocycle() {
        let g = GroupTable::cyclic(2).unwrap();
        let mut c = Cochain::zero(&g, 2);
        c.set(&[1, 0], Phase::new(1, 2));
        assert!(matches!(is_coboundary(&c), Err(Error::NotCocycle)));
    }
}
