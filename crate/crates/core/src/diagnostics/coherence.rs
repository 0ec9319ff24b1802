use crate::diagnostics::fidelity::SupportFactor;
use crate::diagnostics::report::{DiagnosticReport, Thresholds, WindowSchedule};
use crate::error::{Error, Result};
use crate::spin::density::DensityOperator;
use crate::spin::operator::LocalOperator;
use crate::symmetry::action::SymmetryAction;
use crate::symmetry::charge::is_charged;

/// `O ρ O†`, unnormalized; its trace is `tr(ρ O†O)`.
pub fn charged_push(rho: &DensityOperator, op: &LocalOperator) -> Result<DensityOperator> {
    let g = rho.geometry();
    let m = op.conjugate(g, rho.matrix())?;
    DensityOperator::from_trusted(g.clone(), m).with_labels(rho.labels().to_vec())
}

/// `F(ρ|Γ, (OρO†)|Γ)` over the schedule; the `O ↔ O†` variant is reported as
/// `adjoint_values`. With an action given, uncharged probes are noted.
pub fn charge_coherence_scan(
    rho: &DensityOperator,
    op: &LocalOperator,
    schedule: &WindowSchedule,
    action: Option<&SymmetryAction>,
    thresholds: Thresholds,
) -> Result<DiagnosticReport> {
    for w in schedule.windows() {
        if !op.support().is_subset(w) {
            return Err(Error::InvalidSchedule(format!(
                "window {:?} does not contain the probe support {:?}",
                w.sites(),
                op.support().sites()
            )));
        }
    }
    let pushed = charged_push(rho, op)?;
    let mut values = Vec::new();
    let mut adjoint = Vec::new();
    // Hermitian probes have OρO† = O†ρO
    let pulled = if op.distance(&op.adjoint())? <= 1e-14 { None } else { Some(charged_push(rho, &op.adjoint())?) };
    for w in schedule.windows() {
        let r = SupportFactor::new(rho.restrict(w)?.matrix());
        let f = r.fidelity(&SupportFactor::new(pushed.restrict(w)?.matrix())).value;
        values.push(f);
        adjoint.push(match &pulled {
            Some(p) => r.fidelity(&SupportFactor::new(p.restrict(w)?.matrix())).value,
            None => f,
        });
    }
    let mut report = DiagnosticReport::new("charge_coherence", "window", schedule.widths(), values, thresholds)
        .with_adjoint(adjoint)
        .with_convention("psi_O", "O rho O_dagger")
        .with_convention("adjoint_psi_O", "O_dagger rho O")
        .with_convention("fidelity", "(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2");
    if let Some(a) = action {
        let info = is_charged(a, op)?;
        if !info.charged {
            report.note(format!(
                "probe is not charged: trivial-irrep weight {:.3e} of norm {:.3e}",
                info.trivial_norm, info.op_norm
            ));
        }
    }
    Ok(report)
}
