use serde::Serialize;

use crate::anomaly::{
    anomaly_3cocycle, anomaly_of, assess_state, boundary_cocycle_data, class_trivial, half_chain_restrict_with_width,
    AnomalyCocycle, BoundaryCocycleData, LsmProbes, LsmReport, LsmStatus,
};
use crate::channels::{irreversibility_experiment, IrreversibilityReport};
use crate::cohomology::json::CocycleJson;
use crate::diagnostics::coherence::charge_coherence_scan;
use crate::diagnostics::correlators::{clustering_scan, renyi2_correlator};
use crate::diagnostics::entropy::mutual_information;
use crate::diagnostics::fidelity::fidelity_matrices;
use crate::diagnostics::purification::purification_clustering_scan;
use crate::diagnostics::report::{DiagnosticReport, Thresholds, Verdict};
use crate::error::{Error, Result};
use crate::scenario::schema::{DiagnosticKind, Scenario};
use crate::spin::density::{trace_distance_matrices, DensityOperator};
use crate::spin::geometry::{check_dim, ChainGeometry, Region};
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::defects::{strong_symmetry_defect_finite, weak_symmetry_defect};

const DEFAULT_DIAGNOSTICS: [DiagnosticKind; 3] =
    [DiagnosticKind::ChargeCoherence, DiagnosticKind::StrongDefect, DiagnosticKind::WeakDefect];

#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub state: String,
    #[serde(flatten)]
    pub report: DiagnosticReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarEntry {
    pub state: String,
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LsmEntry {
    pub state: String,
    pub probe: String,
    #[serde(flatten)]
    pub report: LsmReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreversibilityEntry {
    pub state: String,
    pub probe: String,
    #[serde(flatten)]
    pub report: IrreversibilityReport,
}

/// Everything one scenario produced, in a fixed order.
#[derive(Clone, Debug, Serialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub scenario: String,
    pub seed: u64,
    pub num_sites: usize,
    pub channel_applied: bool,
    pub reports: Vec<ReportEntry>,
    pub scalars: Vec<ScalarEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lsm: Vec<LsmEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub irreversibility: Vec<IrreversibilityEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReportBundle {
    /// Any INCONCLUSIVE verdict or LSM status.
    pub fn any_inconclusive(&self) -> bool {
        self.reports.iter().any(|r| r.report.verdict == Verdict::Inconclusive)
            || self.lsm.iter().any(|l| l.report.status == LsmStatus::Inconclusive)
            || self.irreversibility.iter().any(|i| i.report.coherence.verdict == Verdict::Inconclusive)
    }
}

struct Context {
    geometry: ChainGeometry,
    action: SymmetryAction,
    probes: Vec<(String, LocalOperator)>,
    thresholds: Thresholds,
}

fn default_distances(n: usize, op: &LocalOperator) -> Vec<usize> {
    let hi = op.support().max().unwrap_or(0);
    (1..n.saturating_sub(hi)).collect()
}

fn max_over_generators(action: &SymmetryAction, f: impl Fn(usize) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in action.generators() {
        worst = worst.max(f(g)?);
    }
    Ok(worst)
}

/// `max` over all intervals of each width `1..N` of the trace distance
/// between restrictions.
pub fn restriction_distances(
    a: &DensityOperator,
    b: &DensityOperator,
    thresholds: Thresholds,
) -> Result<DiagnosticReport> {
    let n = a.geometry().num_sites();
    let mut widths = Vec::new();
    let mut values = Vec::new();
    for w in 1..n {
        let mut worst: f64 = 0.0;
        for start in 0..=n - w {
            let r = Region::interval(start, w);
            worst = worst.max(trace_distance_matrices(a.restrict(&r)?.matrix(), b.restrict(&r)?.matrix()));
        }
        widths.push(w);
        values.push(worst);
    }
    Ok(DiagnosticReport::new("restriction_distance", "width", widths, values, thresholds)
        .with_convention("distance", "max trace distance over intervals of the given width"))
}

fn mutual_information_report(rho: &DensityOperator, thresholds: Thresholds) -> Result<DiagnosticReport> {
    let n = rho.geometry().num_sites();
    let cuts: Vec<usize> = (1..=n / 2).collect();
    let mut values = Vec::new();
    let mut relative = Vec::new();
    for &l in &cuts {
        let mi = mutual_information(rho, &Region::interval(0, l))?;
        values.push(mi.value());
        relative.push(mi.relative);
    }
    Ok(DiagnosticReport::new("mutual_information", "cut", cuts, values, thresholds)
        .with_series("relative_entropy_path", relative)
        .with_convention("region", "sites [0, cut) against the rest")
        .with_convention("units", "nats"))
}

fn renyi2_report(
    rho: &DensityOperator,
    op: &LocalOperator,
    distances: &[usize],
    thresholds: Thresholds,
) -> Result<DiagnosticReport> {
    let mut values = Vec::new();
    for &d in distances {
        values.push(renyi2_correlator(rho, op, &op.translated(d as isize)?)?);
    }
    Ok(DiagnosticReport::new("renyi2", "distance", distances.to_vec(), values, thresholds))
}

fn anomaly_trivial_for(action: &SymmetryAction) -> Result<bool> {
    if action.is_on_site() {
        return Ok(true);
    }
    let (_, omega) = anomaly_of(action, 0, 0)?;
    class_trivial(&omega)
}

fn diagnose_state(
    s: &Scenario,
    ctx: &Context,
    label: &str,
    rho: &DensityOperator,
    bundle: &mut ReportBundle,
    anomaly_cache: &mut Option<Option<bool>>,
) -> Result<()> {
    let n = ctx.geometry.num_sites();
    let t = ctx.thresholds;
    let kinds: Vec<DiagnosticKind> =
        if s.diagnostics.is_empty() { DEFAULT_DIAGNOSTICS.to_vec() } else { s.diagnostics.clone() };
    for kind in kinds {
        match kind {
            DiagnosticKind::StrongDefect => bundle.scalars.push(ScalarEntry {
                state: label.into(),
                name: "strong_defect".into(),
                value: max_over_generators(&ctx.action, |g| strong_symmetry_defect_finite(rho, &ctx.action, g))?,
            }),
            DiagnosticKind::WeakDefect => bundle.scalars.push(ScalarEntry {
                state: label.into(),
                name: "weak_defect".into(),
                value: max_over_generators(&ctx.action, |g| weak_symmetry_defect(rho, &ctx.action, g))?,
            }),
            DiagnosticKind::MutualInformation => {
                bundle.reports.push(ReportEntry { state: label.into(), report: mutual_information_report(rho, t)? })
            }
            // pairwise; handled once all states exist
            DiagnosticKind::RestrictionDistance | DiagnosticKind::Irreversibility => {}
            probe_kind => {
                for (name, op) in &ctx.probes {
                    let sched = s.window_spec().schedule(n, op)?;
                    let distances = if s.distances.is_empty() { default_distances(n, op) } else { s.distances.clone() };
                    let report = match probe_kind {
                        DiagnosticKind::ChargeCoherence => {
                            Some(charge_coherence_scan(rho, op, &sched, Some(&ctx.action), t)?)
                        }
                        DiagnosticKind::PurificationClustering => {
                            Some(purification_clustering_scan(rho, op, &distances, &ctx.action, t)?)
                        }
                        DiagnosticKind::Clustering => Some(clustering_scan(rho, op, op, &distances, t)?),
                        DiagnosticKind::Renyi2 => Some(renyi2_report(rho, op, &distances, t)?),
                        DiagnosticKind::Lsm => {
                            let trivial = *anomaly_cache.get_or_insert_with(|| anomaly_trivial_for(&ctx.action).ok());
                            match trivial {
                                Some(trivial) => {
                                    let probes = LsmProbes { probe: op, distances: &distances, schedule: &sched };
                                    let report = assess_state(rho, &ctx.action, probes, trivial, t)?;
                                    bundle.lsm.push(LsmEntry { state: label.into(), probe: name.clone(), report });
                                }
                                None => bundle.notes.push(format!(
                                    "lsm skipped for {label}: the anomaly index of the action could not be computed"
                                )),
                            }
                            None
                        }
                        _ => None,
                    };
                    if let Some(r) = report {
                        bundle.reports.push(ReportEntry { state: label.into(), report: r.with_probe(name.clone()) });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Build everything the scenario names and run its diagnostics. `seed`
/// overrides the scenario's own.
pub fn run_scenario(s: &Scenario, seed: Option<u64>) -> Result<ReportBundle> {
    let seed = seed.unwrap_or(s.seed);
    let geometry = s.geometry()?;
    let n = geometry.num_sites();
    let action = s.symmetry_spec().build(&geometry)?;
    let probes = s.probes.iter().map(|p| Ok((p.label(), p.build(&geometry)?))).collect::<Result<Vec<_>>>()?;
    let ctx = Context { geometry: geometry.clone(), action, probes, thresholds: s.thresholds() };
    let channel = s.channel.as_ref().map(|c| c.build(&geometry, seed)).transpose()?;
    let mut bundle = ReportBundle {
        schema_version: crate::scenario::schema::SCHEMA_VERSION,
        scenario: s.name.clone(),
        seed,
        num_sites: n,
        channel_applied: channel.is_some(),
        reports: Vec::new(),
        scalars: Vec::new(),
        lsm: Vec::new(),
        irreversibility: Vec::new(),
        notes: Vec::new(),
    };
    let mut anomaly_cache = None;
    let mut diagnosed = Vec::new();
    for (k, named) in s.state_list().iter().enumerate() {
        let label = named.label();
        // states share the seed but not the stream
        let input = named.spec().build(Some(n), seed.wrapping_add(k as u64))?;
        if input.geometry().local_dims() != geometry.local_dims() {
            return Err(Error::Scenario(format!(
                "state {label}: built on {:?}, chain is {:?}",
                input.geometry().local_dims(),
                geometry.local_dims()
            )));
        }
        if let (Some(ch), true) = (&channel, s.diagnostics.contains(&DiagnosticKind::Irreversibility)) {
            let (name, op) =
                ctx.probes.first().ok_or_else(|| Error::Scenario("irreversibility needs a probe".into()))?;
            let sched = s.window_spec().schedule(n, op)?;
            let report = irreversibility_experiment(&input, ch, &ctx.action, op, &sched, ctx.thresholds)?;
            bundle.irreversibility.push(IrreversibilityEntry { state: label.clone(), probe: name.clone(), report });
        }
        let rho = match &channel {
            Some(ch) => crate::channels::apply_channel(ch, &input)?,
            None => input,
        };
        diagnose_state(s, &ctx, &label, &rho, &mut bundle, &mut anomaly_cache)?;
        diagnosed.push((label, rho));
    }
    if s.diagnostics.contains(&DiagnosticKind::RestrictionDistance) {
        if let Some((first, a)) = diagnosed.first() {
            for (label, b) in &diagnosed[1..] {
                let report = restriction_distances(a, b, ctx.thresholds)?;
                bundle.reports.push(ReportEntry { state: format!("{label} vs {first}"), report });
            }
        }
        if diagnosed.len() < 2 {
            bundle.notes.push("restriction_distance needs at least two states".into());
        }
    }
    Ok(bundle)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub size: usize,
    pub state: String,
    pub diagnostic: String,
    pub probe: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub scenario: String,
    pub window_start: usize,
    pub window_width: usize,
    pub rows: Vec<SweepRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Per-size values on a fixed window. Supported: charge coherence, strong
/// and weak defects; other selected diagnostics are noted and skipped.
pub fn sweep_sizes(s: &Scenario, sizes: &[usize], seed: Option<u64>) -> Result<SweepTable> {
    let seed = seed.unwrap_or(s.seed);
    let sweep = s.sweep.as_ref().ok_or_else(|| Error::Scenario("sweep: section missing".into()))?;
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Scenario(format!("sweep: sizes {sizes:?} must increase")));
    }
    let chain = s.chain.clone().ok_or_else(|| Error::Scenario("chain: missing".into()))?;
    let window = Region::interval(sweep.window.start, sweep.window.width);
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let kinds: Vec<DiagnosticKind> =
        if s.diagnostics.is_empty() { DEFAULT_DIAGNOSTICS.to_vec() } else { s.diagnostics.clone() };
    for k in &kinds {
        if !DEFAULT_DIAGNOSTICS.contains(k) {
            notes.push(format!("{k:?} is not swept"));
        }
    }
    for &n in sizes {
        let geometry = chain.resized(n)?;
        check_dim(geometry.dim())?;
        if window.max().is_some_and(|m| m >= n) {
            return Err(Error::Scenario(format!("sweep: window leaves the {n}-site chain")));
        }
        let action = s.symmetry_spec().build(&geometry)?;
        for (k, named) in s.state_list().iter().enumerate() {
            let rho = named.spec().build(Some(n), seed.wrapping_add(k as u64))?;
            for kind in &kinds {
                match kind {
                    DiagnosticKind::ChargeCoherence => {
                        let r = rho.restrict(&window)?;
                        for p in &s.probes {
                            let op = p.build(&geometry)?;
                            let pushed = crate::diagnostics::coherence::charged_push(&rho, &op)?.restrict(&window)?;
                            rows.push(SweepRow {
                                size: n,
                                state: named.label(),
                                diagnostic: "charge_coherence".into(),
                                probe: p.label(),
                                value: fidelity_matrices(r.matrix(), pushed.matrix()).value,
                            });
                        }
                    }
                    DiagnosticKind::StrongDefect | DiagnosticKind::WeakDefect => {
                        let strong = *kind == DiagnosticKind::StrongDefect;
                        let value = max_over_generators(&action, |g| {
                            if strong {
                                strong_symmetry_defect_finite(&rho, &action, g)
                            } else {
                                weak_symmetry_defect(&rho, &action, g)
                            }
                        })?;
                        rows.push(SweepRow {
                            size: n,
                            state: named.label(),
                            diagnostic: if strong { "strong_defect" } else { "weak_defect" }.into(),
                            probe: String::new(),
                            value,
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(SweepTable {
        scenario: s.name.clone(),
        window_start: sweep.window.start,
        window_width: sweep.window.width,
        rows,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnomalyResiduals {
    /// Defining-relation residual of the recovered `V` (chain actions only).
    pub relation: Option<f64>,
    pub scalar: f64,
    pub snap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnomalyOutput {
    pub class_trivial: bool,
    pub cocycle: CocycleJson,
    pub residuals: AnomalyResiduals,
}

fn anomaly_output(data: &BoundaryCocycleData, omega: &AnomalyCocycle) -> Result<AnomalyOutput> {
    Ok(AnomalyOutput {
        class_trivial: class_trivial(omega)?,
        cocycle: CocycleJson::from_cochain(&omega.cocycle),
        residuals: AnomalyResiduals {
            relation: data.residual(),
            scalar: omega.max_scalar_residual,
            snap: omega.max_snap_error,
        },
    })
}

/// The anomaly index named by the scenario's `anomaly` section.
pub fn run_anomaly(s: &Scenario) -> Result<AnomalyOutput> {
    let spec = s.anomaly.clone().unwrap_or_default();
    if let Some(v) = &spec.v_data {
        let data = v.build()?;
        let omega = anomaly_3cocycle(&data, spec.bound)?;
        return anomaly_output(&data, &omega);
    }
    let geometry = s.geometry()?;
    let action = s.symmetry_spec().build(&geometry)?;
    let half = match spec.width {
        Some(w) => half_chain_restrict_with_width(&action, spec.cut, w)?,
        None => crate::anomaly::half_chain_restrict(&action, spec.cut, spec.extra)?,
    };
    let data = boundary_cocycle_data(&half)?;
    let omega = anomaly_3cocycle(&data, spec.bound)?;
    anomaly_output(&data, &omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(body: &str) -> Scenario {
        Scenario::parse(body).unwrap()
    }

    #[test]
    fn rho1_vs_rho2_restrictions_agree() {
        let s = scenario(
            r#"{"schema_version": 1, "name": "t", "chain": {"num_sites": 4},
                "states": [{"name": "rho1", "kind": "maximally_mixed"}, {"name": "rho2", "kind": "parity_projected"}],
                "diagnostics": ["restriction_distance", "strong_defect"]}"#,
        );
        let b = run_scenario(&s, None).unwrap();
        let r = &b.reports[0];
        assert_eq!(r.state, "rho2 vs rho1");
        assert!(r.report.values.iter().all(|v| v.abs() < 1e-14));
        assert!(b.scalars[0].value > 0.5 && b.scalars[1].value < 1e-12);
    }

    #[test]
    fn sweep_of_plus_is_zero() {
        let s = scenario(
            r#"{"schema_version": 1, "chain": {"num_sites": 4},
                "states": [{"kind": "plus_product"}, {"kind": "maximally_mixed"}],
                "probes": [{"pauli": "Z", "sites": [1]}],
                "diagnostics": ["charge_coherence"],
                "sweep": {"sizes": [4, 6], "window": {"start": 0, "width": 3}}}"#,
        );
        let t = sweep_sizes(&s, &[4, 6], None).unwrap();
        assert_eq!(t.rows.len(), 4);
        for row in &t.rows {
            let expect = if row.state == "plus_product" { 0.0 } else { 1.0 };
            assert!((row.value - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn anomaly_section_runs() {
        let s = scenario(r#"{"schema_version": 1, "chain": {"num_sites": 4}, "anomaly": {"cut": 1}}"#);
        let out = run_anomaly(&s).unwrap();
        assert!(out.class_trivial);
    }
}
