//! `{"group": …, "degree": n, "entries": [{"args": [g, …], "phase": "p/q"}]}`.
//!
//! Arguments are element labels or indices. Missing entries are 0.

use serde::{Deserialize, Serialize};

use crate::cohomology::cochain::Cochain;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleEntry {
    pub args: Vec<ElementRef>,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleJson {
    pub group: GroupSpec,
    pub degree: usize,
    pub entries: Vec<CocycleEntry>,
}

impl CocycleJson {
    /// Every entry, zeros included, with labelled arguments.
    pub fn from_cochain(c: &Cochain) -> Self {
        let g = c.group();
        let entries = (0..c.len())
            .map(|i| CocycleEntry {
                args: c.args(i).into_iter().map(|a| ElementRef::Label(g.label(a).to_string())).collect(),
                phase: c.values()[i],
            })
            .collect();
        CocycleJson { group: g.to_spec(), degree: c.degree(), entries }
    }

    pub fn to_cochain(&self) -> Result<Cochain> {
        let g = self.group.build()?;
        if self.degree == 0 || self.degree > 3 {
            return Err(Error::Parse(format!("cocycle degree {} outside 1..=3", self.degree)));
        }
        let mut c = Cochain::zero(&g, self.degree);
        for e in &self.entries {
            if e.args.len() != self.degree {
                return Err(Error::Parse(format!("entry with {} arguments in degree {}", e.args.len(), self.degree)));
            }
            let args = e
                .args
                .iter()
                .map(|a| match a {
                    ElementRef::Index(i) if *i < g.order() => Ok(*i),
                    ElementRef::Index(i) => Err(Error::Parse(format!("element index {i} out of range"))),
                    ElementRef::Label(l) => g.index_of(l).ok_or_else(|| Error::Parse(format!("unknown element {l:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            c.set(&args, e.phase);
        }
        Ok(c)
    }

    pub fn parse(text: &str) -> Result<Cochain> {
        serde_json::from_str::<CocycleJson>(text)?.to_cochain()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    #[test]
    fn round_trip_and_sparse_input() {
        let g = GroupTable::cyclic(2).unwrap();
        let w = Cochain::from_fn(&g, 3, |a| Phase::new((a[0] * a[1] * a[2]) as i64, 2));
        let text = serde_json::to_string(&CocycleJson::from_cochain(&w)).unwrap();
        assert_eq!(CocycleJson::parse(&text).unwrap(), w);
        let sparse = r#"{"group": "Z2", "degree": 3, "entries": [{"args": [1, 1, 1], "phase": "1/2"}]}"#;
        assert_eq!(CocycleJson::parse(sparse).unwrap(), w);
    }
}
