use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 1 << 13;
pub const DIM_CAP_ENV: &str = "SYMSCOPE_DIM_CAP";

/// Dimension budget, read from `SYMSCOPE_DIM_CAP` when set.
pub fn dim_cap() -> usize {
    std::env::var(DIM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_DIM_CAP)
}

pub fn check_dim(dim: usize) -> Result<()> {
    let cap = dim_cap();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

/// A chain of qudits. Site 0 is the fastest-varying index of every basis label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainGeometry {
    local_dims: Vec<usize>,
}

impl ChainGeometry {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if local_dims.is_empty() {
            return Err(Error::InvalidRegion("chain must have at least one site".into()));
        }
        if let Some(d) = local_dims.iter().find(|&&d| d < 2) {
            return Err(Error::DimensionMismatch(format!("local dimension {d} < 2")));
        }
        let dim = local_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::DimensionCap { dim: usize::MAX, cap: dim_cap() })?;
        check_dim(dim)?;
        Ok(ChainGeometry { local_dims })
    }

    pub fn uniform(num_sites: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; num_sites])
    }

    pub fn qubits(num_sites: usize) -> Result<Self> {
        Self::uniform(num_sites, 2)
    }

    /// Geometry without the cap check; for zero-site scalars and internal
    /// sub-geometries whose dimension is already bounded.
    pub(crate) fn unchecked(local_dims: Vec<usize>) -> Self {
        ChainGeometry { local_dims }
    }

    pub fn num_sites(&self) -> usize {
        self.local_dims.len()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn local_dim(&self, site: usize) -> usize {
        self.local_dims[site]
    }

    pub fn dim(&self) -> usize {
        self.local_dims.iter().product()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides(&self.local_dims)
    }

    pub fn sub_dims(&self, sites: &[usize]) -> Vec<usize> {
        sites.iter().map(|&s| self.local_dims[s]).collect()
    }

    pub fn concat(&self, other: &ChainGeometry) -> Result<ChainGeometry> {
        let mut dims = self.local_dims.clone();
        dims.extend_from_slice(&other.local_dims);
        ChainGeometry::new(dims)
    }

    pub fn region_all(&self) -> Region {
        Region::all(self.num_sites())
    }

    pub fn check_region(&self, region: &Region) -> Result<()> {
        if let Some(&s) = region.sites().last() {
            if s >= self.num_sites() {
                return Err(Error::InvalidRegion(format!("site {s} outside a {}-site chain", self.num_sites())));
            }
        }
        Ok(())
    }
}

/// Sorted set of site indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Region(Vec<usize>);

impl From<Vec<usize>> for Region {
    fn from(v: Vec<usize>) -> Self {
        Region::new(v)
    }
}

impl From<Region> for Vec<usize> {
    fn from(r: Region) -> Self {
        r.0
    }
}

impl Region {
    pub fn new(mut sites: Vec<usize>) -> Self {
        sites.sort_unstable();
        sites.dedup();
        Region(sites)
    }

    pub fn interval(start: usize, len: usize) -> Self {
        Region((start..start + len).collect())
    }

    pub fn all(n: usize) -> Self {
        Region((0..n).collect())
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.0.binary_search(&site).is_ok()
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.0.iter().all(|&s| other.contains(s))
    }

    pub fn complement(&self, num_sites: usize) -> Region {
        Region((0..num_sites).filter(|s| !self.contains(*s)).collect())
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Region::new(v)
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Position of each site of `self` inside `other`; `None` unless a subset.
    pub fn positions_in(&self, other: &Region) -> Option<Vec<usize>> {
        self.0.iter().map(|s| other.0.binary_search(s).ok()).collect()
    }
}

pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 1;
    for &d in dims {
        out.push(acc);
        acc *= d;
    }
    out
}

/// Basis offsets of a subsystem inside a larger one.
///
/// Entry `a` is the full-space offset of the subsystem basis label `a`, whose
/// digit `k` (fastest first) sits on site `positions[k]` of the parent.
pub fn subsystem_offsets(parent_dims: &[usize], positions: &[usize]) -> Vec<usize> {
    let st = strides(parent_dims);
    let total: usize = positions.iter().map(|&p| parent_dims[p]).product();
    (0..total)
        .map(|a| {
            let mut rem = a;
            let mut off = 0;
            for &p in positions {
                let d = parent_dims[p];
                off += (rem % d) * st[p];
                rem /= d;
            }
            off
        })
        .collect()
}

/// Offsets of the region and of its complement.
pub fn region_offsets(dims: &[usize], region: &Region) -> (Vec<usize>, Vec<usize>) {
    let comp = region.complement(dims.len());
    (subsystem_offsets(dims, region.sites()), subsystem_offsets(dims, comp.sites()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_are_little_endian() {
        let dims = [2, 3, 2];
        assert_eq!(subsystem_offsets(&dims, &[0]), vec![0, 1]);
        assert_eq!(subsystem_offsets(&dims, &[1]), vec![0, 2, 4]);
        assert_eq!(subsystem_offsets(&dims, &[0, 2]), vec![0, 1, 6, 7]);
        assert_eq!(subsystem_offsets(&dims, &[2, 0]), vec![0, 6, 1, 7]);
        let all = subsystem_offsets(&dims, &[0, 1, 2]);
        assert_eq!(all, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(ChainGeometry::qubits(13).is_ok());
        assert!(matches!(ChainGeometry::qubits(14), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn region_set_ops() {
        let r = Region::new(vec![3, 1, 1]);
        assert_eq!(r.sites(), &[1, 3]);
        assert_eq!(r.complement(5).sites(), &[0, 2, 4]);
        assert_eq!(Region::new(vec![3]).positions_in(&r), Some(vec![1]));
        assert!(Region::new(vec![2]).positions_in(&r).is_none());
    }
}
