//! Finite groups given by multiplication tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates the table: Latin square, associativity, identity, inverses.
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup(format!("{} labels for order {n}", labels.len())));
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(Error::InvalidGroup(format!("row {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &mul {
                if seen[row[j]] {
                    return Err(Error::InvalidGroup(format!("column {j} is not a permutation")));
                }
                seen[row[j]] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let inverse =
            (0..n).map(|g| (0..n).find(|&h| mul[g][h] == identity).expect("latin square has inverses")).collect();
        Ok(GroupTable { name: name.into(), labels, mul, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("Z0".into()));
        }
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), (0..n).map(|i| i.to_string()).collect(), mul)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    /// Direct product with index `i_a * |b| + i_b` and labels `(a,b)`.
    pub fn product(a: &GroupTable, b: &GroupTable) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mut mul = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                mul[x][y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb])).collect();
        Self::from_table(format!("{}x{}", a.name, b.name), labels, mul).expect("product of groups")
    }

    pub fn z2xz2() -> Self {
        let z2 = Self::cyclic(2).expect("Z2");
        Self::product(&z2, &z2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][g];
            k += 1;
        }
        k
    }

    /// All one-dimensional characters, as phase tables `chi[g]`. For an abelian
    /// group this is the full dual group. Index 0 is the trivial character.
    pub fn characters(&self) -> Vec<Vec<Phase>> {
        let n = self.order();
        let exponent = (0..n).map(|g| self.element_order(g)).fold(1usize, num_integer::lcm);
        // characters are homomorphisms G -> Z_exponent; grow them one generator at a time
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![self.identity];
        for g in 0..n {
            if !span.contains(&g) {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        let mut out: Vec<Vec<Phase>> = Vec::new();
        let mut assignment = vec![0usize; gens.len()];
        loop {
            if let Some(chi) = self.extend_character(&gens, &assignment, exponent) {
                if !out.contains(&chi) {
                    out.push(chi);
                }
            }
            let mut i = 0;
            loop {
                if i == assignment.len() {
                    out.sort_by_key(|chi| chi.iter().filter(|p| !p.is_zero()).count());
                    return out;
                }
                assignment[i] += 1;
                if assignment[i] < exponent {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = vec![self.identity];
        let mut k = 0;
        while k < set.len() {
            let x = set[k];
            for &g in gens {
                let y = self.mul[x][g];
                if !set.contains(&y) {
                    set.push(y);
                }
            }
            k += 1;
        }
        set
    }

    fn extend_character(&self, gens: &[usize], assignment: &[usize], exponent: usize) -> Option<Vec<Phase>> {
        let n = self.order();
        let mut chi: Vec<Option<Phase>> = vec![None; n];
        chi[self.identity] = Some(Phase::ZERO);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul[x][g];
                let val = chi[x].unwrap() + Phase::new(assignment[k] as i64, exponent as i64);
                match chi[y] {
                    None => {
                        chi[y] = Some(val);
                        frontier.push(y);
                    }
                    Some(v) if v != val => return None,
                    _ => {}
                }
            }
        }
        let chi: Vec<Phase> = chi.into_iter().map(|c| c.expect("generators span")).collect();
        for a in 0..n {
            for b in 0..n {
                if chi[self.mul[a][b]] != chi[a] + chi[b] {
                    return None;
                }
            }
        }
        Some(chi)
    }

    pub fn character_value(chi: &[Phase], g: usize) -> C64 {
        chi[g].to_complex()
    }

    pub fn to_spec(&self) -> GroupSpec {
        if let Some(spec) = GroupSpec::parse_name(&self.name) {
            if let Ok(g) = spec.build() {
                if g.mul == self.mul {
                    return GroupSpec::Name(self.name.clone());
                }
            }
        }
        GroupSpec::Table { table: self.mul.clone(), labels: Some(self.labels.clone()) }
    }
}

/// JSON form of a group: `"Z2"`, `"Z2xZ2"`, `"Z<n>"`, `"Z<a>xZ<b>"`, or an
/// explicit table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl GroupSpec {
    fn parse_name(name: &str) -> Option<GroupSpec> {
        let ok = name.split('x').all(|f| f.strip_prefix('Z').is_some_and(|n| n.parse::<usize>().is_ok_and(|n| n > 0)));
        ok.then(|| GroupSpec::Name(name.to_string()))
    }

    pub fn build(&self) -> Result<GroupTable> {
        match self {
            GroupSpec::Name(name) => {
                let mut g: Option<GroupTable> = None;
                for factor in name.split('x') {
                    let n: usize = factor
                        .strip_prefix('Z')
                        .and_then(|n| n.parse().ok())
                        .ok_or_else(|| Error::InvalidGroup(format!("unknown group {name:?}")))?;
                    let c = GroupTable::cyclic(n)?;
                    g = Some(match g {
                        None => c,
                        Some(prev) => GroupTable::product(&prev, &c),
                    });
                }
                let mut g = g.ok_or_else(|| Error::InvalidGroup(format!("unknown group {name:?}")))?;
                g.name = name.clone();
                Ok(g)
            }
            GroupSpec::Table { table, labels } => {
                let labels = labels.clone().unwrap_or_else(|| (0..table.len()).map(|i| i.to_string()).collect());
                GroupTable::from_table("custom", labels, table.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_named_groups() {
        let g = GroupSpec::Name("Z2xZ2".into()).build().unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.label(1), "(0,1)");
        assert_eq!(g.label(2), "(1,0)");
        assert!(g.is_abelian());
        assert_eq!(GroupSpec::Name("Z4".into()).build().unwrap().order(), 4);
        assert!(GroupSpec::Name("S3".into()).build().is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(GroupTable::from_table("bad", vec!["a".into(), "b".into()], bad).is_err());
    }

    #[test]
    fn characters_of_abelian_groups() {
        for spec in ["Z2", "Z4", "Z2xZ2", "Z2xZ4", "Z3"] {
            let g = GroupSpec::Name(spec.into()).build().unwrap();
            let chars = g.characters();
            assert_eq!(chars.len(), g.order(), "{spec}");
            assert!(chars[0].iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn s3_has_two_characters() {
        // permutations of 3 points, composed right to left
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let (pa, pb) = (perms[a], perms[b]);
                        idx([pa[pb[0]], pa[pb[1]], pa[pb[2]]])
                    })
                    .collect()
            })
            .collect();
        let g = GroupTable::from_table("S3", (0..6).map(|i| i.to_string()).collect(), table).unwrap();
        assert!(!g.is_abelian());
        assert_eq!(g.characters().len(), 2);
    }
}
