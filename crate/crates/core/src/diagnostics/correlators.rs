use crate::diagnostics::report::{DiagnosticReport, Thresholds};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::spin::density::DensityOperator;
use crate::spin::operator::LocalOperator;

fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut s = linalg::ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// `tr(W ρ W† ρ) / tr(ρ²)` with `W = O_x O_y`.
pub fn renyi2_correlator(rho: &DensityOperator, ox: &LocalOperator, oy: &LocalOperator) -> Result<f64> {
    let purity = rho.purity();
    if purity <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let w = ox.mul(oy)?;
    let pushed = w.conjugate(rho.geometry(), rho.matrix())?;
    Ok(trace_product(&pushed, rho.matrix()).re / purity)
}

/// `tr(ρ op)` through the reduced state on the operator's support.
pub fn local_expectation(rho: &DensityOperator, op: &LocalOperator) -> Result<C64> {
    op.check_fits(rho.geometry())?;
    let reduced = rho.restrict(op.support())?;
    Ok(trace_product(reduced.matrix(), op.matrix()))
}

/// `|tr(ρ a b_d) − tr(ρ a) tr(ρ b_d)|`, `b_d` being `b` shifted right by `d`.
pub fn clustering_scan(
    rho: &DensityOperator,
    a: &LocalOperator,
    b: &LocalOperator,
    distances: &[usize],
    thresholds: Thresholds,
) -> Result<DiagnosticReport> {
    let n = rho.geometry().num_sites();
    let ea = local_expectation(rho, a)?;
    let mut values = Vec::with_capacity(distances.len());
    for &d in distances {
        let bd = b.translated(d as isize)?;
        if bd.support().max().is_some_and(|m| m >= n) {
            return Err(Error::InvalidSchedule(format!("distance {d} moves the probe off the {n}-site chain")));
        }
        let ab = local_expectation(rho, &a.mul(&bd)?)?;
        let eb = local_expectation(rho, &bd)?;
        values.push((ab - ea * eb).norm());
    }
    Ok(DiagnosticReport::new("clustering", "distance", distances.to_vec(), values, thresholds)
        .with_convention("connected", "|tr(rho a b_d) - tr(rho a) tr(rho b_d)|"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::report::Verdict;
    use crate::spin::states;

    #[test]
    fn renyi_examples() {
        let zx = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
        let zy = LocalOperator::pauli_string(&[(3, 'Z')]).unwrap();
        let r1 = states::maximally_mixed(4).unwrap();
        assert!((renyi2_correlator(&r1, &zx, &zy).unwrap() - 1.0).abs() < 1e-12);
        let plus = states::plus_product(4).unwrap();
        assert!(renyi2_correlator(&plus, &zx, &zy).unwrap().abs() < 1e-12);
    }

    #[test]
    fn ghz_has_long_range_order() {
        let z = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
        let ghz = states::ghz_mixture(5).unwrap();
        let r = clustering_scan(&ghz, &z, &z, &[1, 2, 3, 4], Thresholds::default()).unwrap();
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert_eq!(r.verdict, Verdict::Persistent);
        let p = states::paired_pm(6, 0.3).unwrap();
        let r = clustering_scan(&p, &z, &z, &[2, 3, 4, 5], Thresholds::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Vanishing);
    }
}
