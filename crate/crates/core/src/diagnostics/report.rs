use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::geometry::Region;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Vanishing,
    Persistent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Vanishing => "VANISHING",
            Verdict::Persistent => "PERSISTENT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Last value at or below this counts as vanishing.
    pub vanishing: f64,
    /// Last value at or above this may count as persistent.
    pub persistent: f64,
    /// Allowed relative change between the last two values for a plateau.
    pub plateau_relative: f64,
    /// Slack for the non-increasing check.
    pub monotone_slack: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { vanishing: 1e-8, persistent: 1e-3, plateau_relative: 0.1, monotone_slack: 1e-12 }
    }
}

/// VANISHING: last ≤ vanishing and the sequence never increases.
/// PERSISTENT: last ≥ persistent and within the plateau tolerance of the
/// previous value (so at least two values are needed).
pub fn classify(values: &[f64], t: &Thresholds) -> Verdict {
    let Some(&last) = values.last() else {
        return Verdict::Inconclusive;
    };
    let non_increasing = values.windows(2).all(|w| w[1] <= w[0] + t.monotone_slack);
    if last <= t.vanishing && non_increasing {
        return Verdict::Vanishing;
    }
    if values.len() >= 2 {
        let prev = values[values.len() - 2];
        if last >= t.persistent && (last - prev).abs() <= t.plateau_relative * last.abs() {
            return Verdict::Persistent;
        }
    }
    Verdict::Inconclusive
}

/// A value sequence indexed by window width or distance, plus its verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub diagnostic: String,
    /// Window widths, or distances for distance scans (see `axis`).
    pub windows: Vec<usize>,
    pub values: Vec<f64>,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
    pub conventions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub probe: String,
    #[serde(default = "default_axis")]
    pub axis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint_verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn default_axis() -> String {
    "window".into()
}

impl DiagnosticReport {
    pub fn new(diagnostic: &str, axis: &str, windows: Vec<usize>, values: Vec<f64>, thresholds: Thresholds) -> Self {
        let verdict = classify(&values, &thresholds);
        DiagnosticReport {
            diagnostic: diagnostic.to_string(),
            windows,
            values,
            verdict,
            thresholds,
            conventions: BTreeMap::new(),
            probe: String::new(),
            axis: axis.to_string(),
            adjoint_values: None,
            adjoint_verdict: None,
            series: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_convention(mut self, key: &str, value: &str) -> Self {
        self.conventions.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_probe(mut self, probe: impl Into<String>) -> Self {
        self.probe = probe.into();
        self
    }

    pub fn with_adjoint(mut self, values: Vec<f64>) -> Self {
        self.adjoint_verdict = Some(classify(&values, &self.thresholds));
        self.adjoint_values = Some(values);
        self
    }

    pub fn with_series(mut self, name: &str, values: Vec<f64>) -> Self {
        self.series.insert(name.to_string(), values);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Recompute the verdict from values and thresholds.
    pub fn recomputed_verdict(&self) -> Verdict {
        classify(&self.values, &self.thresholds)
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// Nested regions `Γ_1 ⊆ Γ_2 ⊆ …`, strictly growing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSchedule {
    windows: Vec<Region>,
}

impl WindowSchedule {
    pub fn new(windows: Vec<Region>) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::InvalidSchedule("no windows".into()));
        }
        for w in windows.windows(2) {
            if !w[0].is_subset(&w[1]) || w[0].len() >= w[1].len() {
                return Err(Error::InvalidSchedule(format!(
                    "{:?} is not strictly contained in {:?}",
                    w[0].sites(),
                    w[1].sites()
                )));
            }
        }
        Ok(WindowSchedule { windows })
    }

    /// Intervals around `core`, one site added on each side per step (clamped
    /// at the chain ends), up to the full chain or `max_width`.
    pub fn centered(num_sites: usize, core: &Region, max_width: Option<usize>) -> Result<Self> {
        let (Some(lo), Some(hi)) = (core.min(), core.max()) else {
            return Err(Error::InvalidSchedule("empty core region".into()));
        };
        if hi >= num_sites {
            return Err(Error::InvalidSchedule(format!("core {:?} outside the chain", core.sites())));
        }
        let cap = max_width.unwrap_or(num_sites).min(num_sites);
        let (mut a, mut b) = (lo, hi);
        let mut windows = vec![Region::new((a..=b).collect())];
        while b - a + 1 < cap {
            let (na, nb) = (a.saturating_sub(1), (b + 1).min(num_sites - 1));
            let (na, nb) = if nb - na + 1 > cap {
                // only room for one more site
                if a > 0 {
                    (na, b)
                } else {
                    (a, nb)
                }
            } else {
                (na, nb)
            };
            a = na;
            b = nb;
            windows.push(Region::new((a..=b).collect()));
        }
        Self::new(windows)
    }

    /// Explicit widths of intervals centered on `center`.
    pub fn centered_widths(num_sites: usize, center: usize, widths: &[usize]) -> Result<Self> {
        let mut windows = Vec::new();
        for &w in widths {
            if w == 0 || w > num_sites {
                return Err(Error::InvalidSchedule(format!("width {w} for a {num_sites}-site chain")));
            }
            let left = w / 2;
            let start = center.saturating_sub(left).min(num_sites - w);
            windows.push(Region::interval(start, w));
        }
        Self::new(windows)
    }

    pub fn windows(&self) -> &[Region] {
        &self.windows
    }

    pub fn widths(&self) -> Vec<usize> {
        self.windows.iter().map(Region::len).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let t = Thresholds::default();
        assert_eq!(classify(&[0.0, 0.0], &t), Verdict::Vanishing);
        assert_eq!(classify(&[1e-9], &t), Verdict::Vanishing);
        assert_eq!(classify(&[0.0, 1e-9], &t), Verdict::Inconclusive);
        assert_eq!(classify(&[1.0, 1.0], &t), Verdict::Persistent);
        assert_eq!(classify(&[1.0], &t), Verdict::Inconclusive);
        assert_eq!(classify(&[1.0, 0.5], &t), Verdict::Inconclusive);
        assert_eq!(classify(&[], &t), Verdict::Inconclusive);
    }

    #[test]
    fn centered_schedule() {
        let s = WindowSchedule::centered(8, &Region::new(vec![3]), None).unwrap();
        assert_eq!(s.widths(), vec![1, 3, 5, 7, 8]);
        let s = WindowSchedule::centered(8, &Region::new(vec![0]), Some(4)).unwrap();
        assert_eq!(s.widths(), vec![1, 2, 3, 4]);
        assert!(WindowSchedule::new(vec![Region::new(vec![1, 2]), Region::new(vec![2, 3, 4])]).is_err());
    }
}
