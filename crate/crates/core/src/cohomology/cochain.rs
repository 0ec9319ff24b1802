use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::phase::Phase;

/// A map `Gⁿ → Q/Z`, stored densely. Tuple `(g_1, …, g_n)` has index
/// `Σ g_i |G|^(n−i)` (first argument slowest).
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    group: GroupTable,
    degree: usize,
    values: Vec<Phase>,
}

impl Cochain {
    pub fn zero(group: &GroupTable, degree: usize) -> Self {
        let len = group.order().pow(degree as u32);
        Cochain { group: group.clone(), degree, values: vec![Phase::ZERO; len] }
    }

    pub fn from_values(group: &GroupTable, degree: usize, values: Vec<Phase>) -> Result<Self> {
        let len = group.order().pow(degree as u32);
        if values.len() != len {
            return Err(Error::CochainMismatch(format!(
                "degree-{degree} cochain over a group of order {} needs {len} values, got {}",
                group.order(),
                values.len()
            )));
        }
        Ok(Cochain { group: group.clone(), degree, values })
    }

    pub fn from_fn(group: &GroupTable, degree: usize, f: impl Fn(&[usize]) -> Phase) -> Self {
        let mut c = Self::zero(group, degree);
        for i in 0..c.values.len() {
            let args = c.args(i);
            c.values[i] = f(&args);
        }
        c
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.degree);
        let n = self.group.order();
        args.iter().fold(0, |acc, &g| acc * n + g)
    }

    pub fn args(&self, mut index: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut out = vec![0; self.degree];
        for slot in out.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    pub fn get(&self, args: &[usize]) -> Phase {
        self.values[self.index(args)]
    }

    pub fn set(&mut self, args: &[usize], p: Phase) {
        let i = self.index(args);
        self.values[i] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Phase::is_zero)
    }

    /// Value 0 whenever some argument is the identity.
    pub fn is_normalized(&self) -> bool {
        let e = self.group.identity();
        (0..self.len()).all(|i| !self.args(i).contains(&e) || self.values[i].is_zero())
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> i64 {
        self.values.iter().fold(1i64, |acc, p| num_integer::lcm(acc, p.den()))
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.group != other.group {
            return Err(Error::CochainMismatch(format!(
                "degree {} over {} vs degree {} over {}",
                self.degree,
                self.group.name(),
                other.degree,
                other.group.name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect();
        Ok(Cochain { group: self.group.clone(), degree: self.degree, values })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a - *b).collect();
        Ok(Cochain { group: self.group.clone(), degree: self.degree, values })
    }

    pub fn neg(&self) -> Cochain {
        Cochain { group: self.group.clone(), degree: self.degree, values: self.values.iter().map(|p| -*p).collect() }
    }
}

/// Integer coefficients of `δ`: `(δc)(g_1..g_{n+1}) = Σ_k (−1)^k c(d_k(g))`,
/// each term as `(sign, index into c)`.
pub fn coboundary_terms(group: &GroupTable, degree: usize, args: &[usize]) -> Vec<(i64, usize)> {
    let n = group.order();
    let idx = |v: &[usize]| v.iter().fold(0usize, |acc, &g| acc * n + g);
    let m = degree + 1;
    debug_assert_eq!(args.len(), m);
    let mut terms = Vec::with_capacity(m + 1);
    // d_0 drops the first argument
    terms.push((1, idx(&args[1..])));
    // d_i multiplies arguments i and i+1
    for i in 1..m {
        let mut v = Vec::with_capacity(degree);
        v.extend_from_slice(&args[..i - 1]);
        v.push(group.mul(args[i - 1], args[i]));
        v.extend_from_slice(&args[i + 1..]);
        terms.push((if i % 2 == 0 { 1 } else { -1 }, idx(&v)));
    }
    // d_m drops the last argument
    terms.push((if m % 2 == 0 { 1 } else { -1 }, idx(&args[..m - 1])));
    terms
}

/// The coboundary `δc`, of degree one higher.
pub fn coboundary(c: &Cochain) -> Cochain {
    let mut out = Cochain::zero(c.group(), c.degree() + 1);
    for i in 0..out.len() {
        let args = out.args(i);
        out.values[i] =
            coboundary_terms(c.group(), c.degree(), &args).into_iter().map(|(s, j)| c.values[j].scale(s)).sum();
    }
    out
}

pub fn is_cocycle(c: &Cochain) -> bool {
    coboundary(c).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_formula() {
        let g = GroupTable::cyclic(4).unwrap();
        let w = Cochain::from_fn(&g, 1, |a| Phase::new(a[0] as i64 * a[0] as i64, 7));
        let d = coboundary(&w);
        for a in 0..4 {
            for b in 0..4 {
                let expect = w.get(&[a]) + w.get(&[b]) - w.get(&[g.mul(a, b)]);
                assert_eq!(d.get(&[a, b]), expect);
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = GroupTable::z2xz2();
        assert!(coboundary(&Cochain::zero(&g, 2)).is_zero());
    }

    #[test]
    fn index_round_trip() {
        let g = GroupTable::cyclic(3).unwrap();
        let c = Cochain::zero(&g, 3);
        for i in 0..c.len() {
            assert_eq!(c.index(&c.args(i)), i);
        }
    }
}
