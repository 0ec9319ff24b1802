//! Scenario files.
//!
//! ```json
//! {"schema_version": 1, "name": "demo", "seed": 7,
//!  "chain": {"num_sites": 6},
//!  "states": [{"name": "plus", "kind": "plus_product"}],
//!  "symmetry": {"group": "Z2", "realization": {"kind": "onsite", "unitaries": {"1": "X"}}},
//!  "probes": [{"pauli": "Z", "sites": [2]}],
//!  "windows": {"kind": "centered", "max_width": 5},
//!  "diagnostics": ["charge_coherence", "strong_defect"]}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::anomaly::VDataJson;
use crate::channels::ChannelSpec;
use crate::diagnostics::report::{Thresholds, WindowSchedule};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::spin::geometry::{ChainGeometry, Region};
use crate::spin::matrix_json::MatrixSpec;
use crate::spin::operator::LocalOperator;
use crate::spin::states::StateSpec;
use crate::symmetry::spec::SymmetrySpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(default)]
    pub num_sites: Option<usize>,
    #[serde(default)]
    pub local_dim: Option<usize>,
    #[serde(default)]
    pub local_dims: Option<Vec<usize>>,
}

impl ChainSpec {
    pub fn build(&self) -> Result<ChainGeometry> {
        match (&self.local_dims, self.num_sites) {
            (Some(d), None) => ChainGeometry::new(d.clone()),
            (Some(d), Some(n)) if d.len() == n => ChainGeometry::new(d.clone()),
            (Some(d), Some(n)) => Err(Error::Scenario(format!("chain: {} local_dims for num_sites {n}", d.len()))),
            (None, Some(n)) => ChainGeometry::uniform(n, self.local_dim.unwrap_or(2)),
            (None, None) => Err(Error::Scenario("chain: needs num_sites or local_dims".into())),
        }
    }

    /// The same chain resized to `n` uniform sites.
    pub fn resized(&self, n: usize) -> Result<ChainGeometry> {
        let d = match &self.local_dims {
            Some(ds) => {
                let first = ds.first().copied().unwrap_or(2);
                if ds.iter().any(|&x| x != first) {
                    return Err(Error::Scenario("chain: only uniform chains can be resized".into()));
                }
                first
            }
            None => self.local_dim.unwrap_or(2),
        };
        ChainGeometry::uniform(n, d)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NamedState {
    #[serde(default)]
    pub name: Option<String>,
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

impl NamedState {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.clone())
    }

    pub fn spec(&self) -> StateSpec {
        StateSpec::new(&self.kind, self.params.clone())
    }
}

/// A probe: a Pauli word on `sites` (`"ZZ"` on `[2, 3]`) or a matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub pauli: Option<String>,
    #[serde(default)]
    pub matrix: Option<MatrixSpec>,
    pub sites: Vec<usize>,
}

impl ProbeSpec {
    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        let sites: Vec<String> = self.sites.iter().map(usize::to_string).collect();
        match &self.pauli {
            Some(p) => format!("{p}@{}", sites.join(",")),
            None => format!("matrix@{}", sites.join(",")),
        }
    }

    pub fn build(&self, geometry: &ChainGeometry) -> Result<LocalOperator> {
        for &s in &self.sites {
            if s >= geometry.num_sites() {
                return Err(Error::Scenario(format!(
                    "probe {}: site {s} outside a {}-site chain",
                    self.label(),
                    geometry.num_sites()
                )));
            }
        }
        let m: CMatrix = match (&self.pauli, &self.matrix) {
            (Some(word), None) => {
                let letters: Vec<char> = word.chars().collect();
                if letters.len() != self.sites.len() {
                    return Err(Error::Scenario(format!(
                        "probe {}: {} Pauli letters for {} sites",
                        self.label(),
                        letters.len(),
                        self.sites.len()
                    )));
                }
                let factors: Vec<(usize, char)> = self.sites.iter().copied().zip(letters).collect();
                return LocalOperator::pauli_string(&factors);
            }
            (None, Some(m)) => m.to_matrix()?,
            _ => return Err(Error::Scenario(format!("probe {}: give exactly one of pauli, matrix", self.label()))),
        };
        let dims = geometry.sub_dims(&self.sites);
        LocalOperator::new(self.sites.clone(), dims, m)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowSpec {
    /// Grown around the probe support (or `core`), one site per side a step.
    Centered {
        #[serde(default)]
        core: Option<Vec<usize>>,
        #[serde(default)]
        max_width: Option<usize>,
    },
    Widths {
        center: usize,
        widths: Vec<usize>,
    },
    Explicit {
        windows: Vec<Vec<usize>>,
    },
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec::Centered { core: None, max_width: None }
    }
}

impl WindowSpec {
    pub fn schedule(&self, num_sites: usize, probe: &LocalOperator) -> Result<WindowSchedule> {
        let sched = match self {
            WindowSpec::Centered { core, max_width } => {
                let core = core.clone().map(Region::new).unwrap_or_else(|| probe.support().clone());
                WindowSchedule::centered(num_sites, &core, *max_width)?
            }
            WindowSpec::Widths { center, widths } => WindowSchedule::centered_widths(num_sites, *center, widths)?,
            WindowSpec::Explicit { windows } => {
                for w in windows {
                    if let Some(&s) = w.iter().find(|&&s| s >= num_sites) {
                        return Err(Error::Scenario(format!("windows: site {s} outside a {num_sites}-site chain")));
                    }
                }
                WindowSchedule::new(windows.iter().cloned().map(Region::new).collect())?
            }
        };
        for w in sched.windows() {
            if !probe.support().is_subset(w) {
                return Err(Error::Scenario(format!(
                    "windows: {:?} does not contain probe support {:?}",
                    w.sites(),
                    probe.support().sites()
                )));
            }
        }
        Ok(sched)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    ChargeCoherence,
    StrongDefect,
    WeakDefect,
    RestrictionDistance,
    PurificationClustering,
    Clustering,
    Renyi2,
    MutualInformation,
    Lsm,
    Irreversibility,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FixedWindow {
    pub start: usize,
    pub width: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub sizes: Vec<usize>,
    pub window: FixedWindow,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnomalySpec {
    #[serde(default)]
    pub cut: usize,
    #[serde(default)]
    pub extra: usize,
    /// Explicit window width, overriding `extra`.
    #[serde(default)]
    pub width: Option<usize>,
    #[serde(default)]
    pub bound: Option<u64>,
    /// Externally supplied boundary data instead of a chain action.
    #[serde(default)]
    pub v_data: Option<VDataJson>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub chain: Option<ChainSpec>,
    #[serde(default)]
    pub state: Option<NamedState>,
    #[serde(default)]
    pub states: Vec<NamedState>,
    /// Defaults to the Z2 flip `∏σ^x`.
    #[serde(default)]
    pub symmetry: Option<SymmetrySpec>,
    #[serde(default)]
    pub probes: Vec<ProbeSpec>,
    #[serde(default)]
    pub windows: Option<WindowSpec>,
    /// Distances for correlator scans; default `1..` up to the chain end.
    #[serde(default)]
    pub distances: Vec<usize>,
    #[serde(default)]
    pub diagnostics: Vec<DiagnosticKind>,
    #[serde(default)]
    pub channel: Option<ChannelSpec>,
    #[serde(default)]
    pub thresholds: Option<Thresholds>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub anomaly: Option<AnomalySpec>,
    #[serde(default)]
    pub outputs: Option<OutputSpec>,
}

/// 1-based line of the first `"key"` in `text`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

impl Scenario {
    /// Parse and validate. Syntax and schema errors carry serde's line and
    /// column; semantic errors the line of the offending section.
    pub fn parse(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(format!("schema: {e}")))?;
        s.validate().map_err(|(section, e)| match line_of(text, section) {
            Some(line) => Error::Scenario(format!("{e} (section \"{section}\" at line {line})")),
            None => Error::Scenario(format!("{e} (section \"{section}\")")),
        })?;
        Ok(s)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Scenario> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Named states in order; `state` (if given) first.
    pub fn state_list(&self) -> Vec<NamedState> {
        self.state.iter().cloned().chain(self.states.iter().cloned()).collect()
    }

    pub fn symmetry_spec(&self) -> SymmetrySpec {
        self.symmetry.clone().unwrap_or_else(SymmetrySpec::z2_flip)
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds.unwrap_or_default()
    }

    pub fn window_spec(&self) -> WindowSpec {
        self.windows.clone().unwrap_or_default()
    }

    pub fn geometry(&self) -> Result<ChainGeometry> {
        self.chain.as_ref().ok_or_else(|| Error::Scenario("chain: missing".into()))?.build()
    }

    fn validate(&self) -> std::result::Result<(), (&'static str, Error)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err((
                "schema_version",
                Error::Scenario(format!(
                    "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                    self.schema_version
                )),
            ));
        }
        let anomaly_only = self.anomaly.as_ref().is_some_and(|a| a.v_data.is_some());
        if anomaly_only {
            return Ok(());
        }
        let geo = self.geometry().map_err(|e| ("chain", e))?;
        let n = geo.num_sites();
        if self.anomaly.is_none() && self.state_list().is_empty() {
            return Err(("states", Error::Scenario("states: at least one state is required".into())));
        }
        let mut probes = Vec::new();
        for p in &self.probes {
            probes.push(p.build(&geo).map_err(|e| ("probes", e))?);
        }
        if self.sweep.is_none() {
            for op in &probes {
                self.window_spec().schedule(n, op).map_err(|e| ("windows", e))?;
            }
        }
        for &d in &self.distances {
            if d == 0 || d >= n {
                return Err(("distances", Error::Scenario(format!("distances: {d} is not in 1..{n}"))));
            }
        }
        let needs_probe = self.diagnostics.iter().any(|d| {
            matches!(
                d,
                DiagnosticKind::ChargeCoherence
                    | DiagnosticKind::PurificationClustering
                    | DiagnosticKind::Clustering
                    | DiagnosticKind::Renyi2
                    | DiagnosticKind::Lsm
                    | DiagnosticKind::Irreversibility
            )
        });
        if needs_probe && probes.is_empty() {
            return Err(("diagnostics", Error::Scenario("diagnostics: selected diagnostics need a probe".into())));
        }
        if self.diagnostics.contains(&DiagnosticKind::Irreversibility) && self.channel.is_none() {
            return Err(("diagnostics", Error::Scenario("diagnostics: irreversibility needs a channel".into())));
        }
        if let Some(sw) = &self.sweep {
            if sw.sizes.is_empty() || sw.sizes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(("sweep", Error::Scenario(format!("sweep: sizes {:?} must increase", sw.sizes))));
            }
            let lo = sw.sizes[0];
            if sw.window.width == 0 || sw.window.start + sw.window.width > lo {
                return Err((
                    "sweep",
                    Error::Scenario(format!(
                        "sweep: window [{}, {}) does not fit the smallest size {lo}",
                        sw.window.start,
                        sw.window.start + sw.window.width
                    )),
                ));
            }
            for p in &self.probes {
                if p.sites.iter().any(|&s| s < sw.window.start || s >= sw.window.start + sw.window.width) {
                    return Err(("sweep", Error::Scenario(format!("sweep: probe {} leaves the window", p.label()))));
                }
            }
        }
        Ok(())
    }
}
