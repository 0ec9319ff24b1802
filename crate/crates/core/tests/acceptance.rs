//! One line per acceptance criterion. Run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use rand::Rng;

use symscope_core::anomaly::{anomaly_3cocycle, anomaly_of, class_trivial, models, VDataJson};
use symscope_core::channels::{
    apply_channel, cluster_dephasing_channel, cluster_stabilizers, irreversibility_experiment,
    is_strongly_symmetric_channel, random_strongly_symmetric_channel, stabilizer_expectations, ClusterBath,
};
use symscope_core::cohomology::{coboundary, is_coboundary, projective_2cocycle, same_class, Cochain};
use symscope_core::diagnostics::purification::original_region;
use symscope_core::diagnostics::{
    canonical_purification, charge_coherence_scan, fidelity, mutual_information, purification_clustering_scan,
    Thresholds, Verdict, WindowSchedule,
};
use symscope_core::group::GroupTable;
use symscope_core::linalg::{self, c64, named_matrix};
use symscope_core::phase::Phase;
use symscope_core::random;
use symscope_core::spin::states;
use symscope_core::spin::{ChainGeometry, DensityOperator, LocalOperator, Region};
use symscope_core::symmetry::action::SymmetryAction;
use symscope_core::symmetry::defects::{strong_symmetry_defect_finite, weak_symmetry_defect};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let out = f();
    let dt = t.elapsed();
    match out {
        Ok(d) if dt <= limit => Ok(format!("{d}; {:.2}s", dt.as_secs_f64())),
        Ok(d) => Err(format!("{d}; {:.2}s exceeds {:.0}s", dt.as_secs_f64(), limit.as_secs_f64())),
        Err(d) => Err(format!("{d}; {:.2}s", dt.as_secs_f64())),
    }
}

fn all_regions(n: usize, max_len: usize) -> Vec<Region> {
    (1u32..(1 << n))
        .filter(|m| m.count_ones() as usize <= max_len)
        .map(|m| Region::new((0..n).filter(|s| m >> s & 1 == 1).collect()))
        .collect()
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(5), || {
        let n = 8;
        let rho1 = states::maximally_mixed(n).unwrap();
        let rho2 = states::parity_projected(n).unwrap();
        let mut worst: f64 = 0.0;
        for r in all_regions(n, 7) {
            worst = worst.max(rho1.restrict(&r).unwrap().trace_distance(&rho2.restrict(&r).unwrap()).unwrap());
        }
        let a = SymmetryAction::z2_flip(n).unwrap();
        let d1 = strong_symmetry_defect_finite(&rho1, &a, 1).unwrap();
        let d2 = strong_symmetry_defect_finite(&rho2, &a, 1).unwrap();
        check(
            worst <= 1e-12 && d2 == 0.0 && d1 >= 0.5,
            format!("max restricted distance {worst:.1e}, strong defect rho1 {d1:.3}, rho2 {d2:.1e}"),
        )
    })
}

fn criterion_2() -> Outcome {
    let n = 8;
    let a = SymmetryAction::z2_flip(n).unwrap();
    let t = Thresholds::default();
    let mut problems = Vec::new();
    for i in 0..n {
        let z = LocalOperator::pauli_string(&[(i, 'Z')]).unwrap();
        let sched = WindowSchedule::centered(n, z.support(), None).unwrap();
        let scan = |rho: &DensityOperator| charge_coherence_scan(rho, &z, &sched, Some(&a), t).unwrap();
        let plus = scan(&states::plus_product(n).unwrap());
        if plus.values.iter().any(|v| *v > 1e-12) || plus.verdict != Verdict::Vanishing {
            problems.push(format!("plus at {i}: {:?}", plus.values));
        }
        for p in [0.1, 0.5, 0.9] {
            let r = scan(&states::paired_pm(n, p).unwrap());
            if r.verdict != Verdict::Vanishing || r.last().unwrap() > 1e-12 {
                problems.push(format!("rho3 p={p} at {i}: {:?} {:?}", r.values, r.verdict));
            }
        }
        let mixed = scan(&states::maximally_mixed(n).unwrap());
        if mixed.values.iter().any(|v| (v - 1.0).abs() > 1e-12) || mixed.verdict != Verdict::Persistent {
            problems.push(format!("mixed at {i}: {:?}", mixed.values));
        }
        let rho2 = scan(&states::parity_projected(n).unwrap());
        let proper: Vec<f64> =
            sched.widths().iter().zip(&rho2.values).filter(|(w, _)| **w < n).map(|(_, v)| *v).collect();
        if proper.iter().any(|v| (v - 1.0).abs() > 1e-12) {
            problems.push(format!("rho2 at {i}: {:?}", rho2.values));
        }
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            "plus 0, rho3 vanishing for p in {0.1,0.5,0.9}, mixed 1, rho2 1 on proper windows, probes Z_0..Z_7".into()
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_3() -> Outcome {
    let mut self_err: f64 = 0.0;
    let mut sym_err: f64 = 0.0;
    let mut tensor_err: f64 = 0.0;
    let mut mono_err: f64 = 0.0;
    for k in 0..200u64 {
        let rho = states::random_state(&[2, 2], 1 + (k as usize % 4), 1000 + k).unwrap();
        let sigma = states::random_state(&[2, 2], 1 + (k as usize / 4 % 4), 5000 + k).unwrap();
        self_err = self_err.max((fidelity(&rho, &rho).unwrap().value - 1.0).abs());
        let f = fidelity(&rho, &sigma).unwrap().value;
        sym_err = sym_err.max((f - fidelity(&sigma, &rho).unwrap().value).abs());
        let r2 = states::random_state(&[2], 2, 9000 + k).unwrap();
        let s2 = states::random_state(&[2], 1 + (k as usize % 2), 13000 + k).unwrap();
        let joint =
            fidelity(&DensityOperator::tensor(&rho, &r2).unwrap(), &DensityOperator::tensor(&sigma, &s2).unwrap())
                .unwrap()
                .value;
        tensor_err = tensor_err.max((joint - f * fidelity(&r2, &s2).unwrap().value).abs());

        let a = states::random_state(&[2, 2, 2, 2], 1 + (k as usize % 16), 17000 + k).unwrap();
        let b = states::random_state(&[2, 2, 2, 2], 1 + (k as usize * 7 % 16), 21000 + k).unwrap();
        let nested = [vec![1], vec![1, 2], vec![0, 1, 2], vec![0, 1, 2, 3]];
        let fs: Vec<f64> = nested
            .iter()
            .map(|w| {
                let r = Region::new(w.clone());
                fidelity(&a.restrict(&r).unwrap(), &b.restrict(&r).unwrap()).unwrap().value
            })
            .collect();
        for p in fs.windows(2) {
            mono_err = mono_err.max(p[1] - p[0]);
        }
    }
    let ok = self_err <= 1e-10 && sym_err <= 1e-10 && tensor_err <= 1e-10 && mono_err <= 1e-9;
    check(
        ok,
        format!(
            "200 pairs: |F(r,r)-1| {self_err:.1e}, symmetry {sym_err:.1e}, tensor {tensor_err:.1e}, largest increase {mono_err:.1e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    timed(Duration::from_secs(10), || {
        let groups = [GroupTable::cyclic(2).unwrap(), GroupTable::cyclic(4).unwrap(), GroupTable::z2xz2()];
        let mut checked = 0usize;
        for g in &groups {
            for degree in 0..=2 {
                let len = g.order().pow(degree as u32);
                for i in 0..len {
                    let mut c = Cochain::zero(g, degree);
                    c.set(&c.args(i), Phase::new(1, 997));
                    if !coboundary(&coboundary(&c)).is_zero() {
                        return Err(format!("d^2 != 0 on {} degree {degree} basis {i}", g.name()));
                    }
                    checked += 1;
                }
            }
        }
        let v4 = GroupTable::z2xz2();
        let paulis: Vec<_> = ["I", "X", "Y", "Z"].iter().map(|s| named_matrix(s).unwrap()).collect();
        let w = projective_2cocycle(&v4, &paulis, None).unwrap();
        let entry = w.get(&[1, 2]);
        let pauli_nontrivial = is_coboundary(&w).unwrap().is_none();

        let mut rng = random::rng(44);
        let mut witnesses = 0;
        for g in &groups {
            for degree in [1, 2] {
                for _ in 0..20 {
                    let len = g.order().pow(degree as u32);
                    let vals = (0..len).map(|_| Phase::new(rng.random_range(0..24), 24)).collect();
                    let eta = Cochain::from_values(g, degree, vals).unwrap();
                    let c = coboundary(&eta);
                    match is_coboundary(&c).unwrap() {
                        Some(w) if coboundary(&w) == c => witnesses += 1,
                        _ => {
                            return Err(format!(
                                "coboundary over {} in degree {} not trivialized",
                                g.name(),
                                degree + 1
                            ))
                        }
                    }
                }
            }
        }
        check(
            entry == Phase::new(1, 4) && pauli_nontrivial && witnesses == 120,
            format!(
                "d^2 = 0 on {checked} basis cochains; Pauli w((0,1),(1,0)) = {entry}, nontrivial {pauli_nontrivial}; {witnesses}/120 witnesses verified"
            ),
        )
    })
}

fn criterion_5() -> Outcome {
    let flip = SymmetryAction::z2_flip(10).unwrap();
    let (flip_data, flip_w) = anomaly_of(&flip, 3, 0).unwrap();
    let sub = models::z2xz2_sublattice(10).unwrap();
    let (_, sub_w) = anomaly_of(&sub, 2, 1).unwrap();
    let on_site_trivial = class_trivial(&flip_w).unwrap() && class_trivial(&sub_w).unwrap();

    let conj = flip.conjugated_by(&models::cz_layer(10, 0).unwrap(), 1).unwrap();
    let (_, conj_w) = anomaly_of(&conj, 3, 0).unwrap();
    let conj_sub = sub.conjugated_by(&models::cz_layer(10, 1).unwrap(), 1).unwrap();
    let (_, conj_sub_w) = anomaly_of(&conj_sub, 3, 0).unwrap();
    let conj_same = same_class(&conj_w.cocycle, &flip_w.cocycle).unwrap()
        && same_class(&conj_sub_w.cocycle, &sub_w.cocycle).unwrap();

    let ring = models::cz_dressed_flip_ring(10).unwrap();
    let (ring_data, ring_w) = anomaly_of(&ring, 0, 0).unwrap();
    let mut rng = random::rng(5);
    let mut invariant = 0;
    for k in 0..50 {
        let data = if k % 2 == 0 { &ring_data } else { &flip_data };
        let reference = if k % 2 == 0 { &ring_w.cocycle } else { &flip_w.cocycle };
        let den = rng.random_range(2..13);
        let vals = (0..data.group().order().pow(2)).map(|_| Phase::new(rng.random_range(0..den), den)).collect();
        let theta = Cochain::from_values(data.group(), 2, vals).unwrap();
        let w = anomaly_3cocycle(&data.regauged(&theta).unwrap(), Some(32 * den as u64)).unwrap();
        if same_class(&w.cocycle, reference).unwrap() {
            invariant += 1;
        }
    }

    // synthetic data: one qubit, alpha = Ad Z, V_{1,1} = X, so w(1,1,1) = -1
    let synthetic = r#"{"group": "Z2", "local_dims": [2], "v": {"1,1": "X"},
                        "alpha": {"1": [[{"kind": "Z", "sites": [0]}]]}}"#;
    let data = serde_json::from_str::<VDataJson>(synthetic).unwrap().build().unwrap();
    let w = anomaly_3cocycle(&data, None).unwrap();
    let text = serde_json::to_string(&VDataJson::from_data(&data)).unwrap();
    let again = anomaly_3cocycle(&serde_json::from_str::<VDataJson>(&text).unwrap().build().unwrap(), None).unwrap();
    let ring_text = serde_json::to_string(&VDataJson::from_data(&ring_data)).unwrap();
    let ring_again =
        anomaly_3cocycle(&serde_json::from_str::<VDataJson>(&ring_text).unwrap().build().unwrap(), None).unwrap();
    let synthetic_ok = w.cocycle.get(&[1, 1, 1]) == Phase::new(1, 2)
        && !class_trivial(&w).unwrap()
        && same_class(&again.cocycle, &w.cocycle).unwrap()
        && same_class(&ring_again.cocycle, &ring_w.cocycle).unwrap()
        && !class_trivial(&ring_again).unwrap();
    check(
        on_site_trivial && conj_same && invariant == 50 && synthetic_ok,
        format!(
            "on-site trivial {on_site_trivial}, conjugated same class {conj_same}, regauge invariant {invariant}/50, synthetic round trip {synthetic_ok}"
        ),
    )
}

fn criterion_6() -> Outcome {
    timed(Duration::from_secs(30), || {
        let n = 5;
        let ch = cluster_dephasing_channel(n).unwrap();
        let psi = ch.joint_pure(&states::plus_product_vector(n).unwrap()).unwrap();
        let stabs = cluster_stabilizers(n, ClusterBath::Periodic).unwrap();
        let stab_err =
            stabilizer_expectations(&psi, &stabs).unwrap().iter().map(|e| (e - 1.0).abs()).fold(0.0, f64::max);
        let out = apply_channel(&ch, &states::plus_product(n).unwrap()).unwrap();
        let window = out.restrict(&Region::new(vec![1, 2, 3])).unwrap();
        let window_err = linalg::max_abs_diff(window.matrix(), &(linalg::identity(8) * c64(0.125, 0.0)));
        let a = SymmetryAction::z2_flip(n).unwrap();
        let sym = is_strongly_symmetric_channel(&ch, &a).unwrap();
        let z = LocalOperator::pauli_string(&[(2, 'Z')]).unwrap();
        let sched = WindowSchedule::centered(n, z.support(), Some(n - 1)).unwrap();
        let r =
            irreversibility_experiment(&states::plus_product(n).unwrap(), &ch, &a, &z, &sched, Thresholds::default())
                .unwrap();
        let coherence_one = r.coherence.values.iter().all(|v| (v - 1.0).abs() <= 1e-10);
        let ext_min = r.extension.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let ok = stab_err <= 1e-10
            && window_err <= 1e-10
            && sym.symmetric
            && r.joint_strong_defect <= 1e-10
            && r.coherence.verdict == Verdict::Persistent
            && coherence_one
            && ext_min > 0.1;
        check(
            ok,
            format!(
                "{} stabilizers within {stab_err:.1e}, window vs I/8 {window_err:.1e}, channel defect {:.1e}, joint defect {:.1e}, coherence {:?} {:?}, extension defect min {ext_min:.3} over widths {:?}",
                stabs.len(),
                sym.defect,
                r.joint_strong_defect,
                r.coherence.verdict,
                r.coherence.values,
                r.extension.windows,
            ),
        )
    })
}

fn criterion_7() -> Outcome {
    let mut round_trip: f64 = 0.0;
    for k in 0..100u64 {
        let n = 1 + (k as usize % 3);
        let dim = 1usize << n;
        let rho = states::random_state(&vec![2; n], 1 + (k as usize % dim), 300 + k).unwrap();
        let psi = canonical_purification(&rho).unwrap();
        let back = psi.restrict(&original_region(n)).unwrap();
        round_trip = round_trip.max(linalg::max_abs_diff(back.matrix(), rho.matrix()));
    }
    let n = 6;
    let a = SymmetryAction::z2_flip(n).unwrap();
    let z = LocalOperator::pauli_string(&[(0, 'Z')]).unwrap();
    let far = [n - 1];
    let t = Thresholds::default();
    let mixed = purification_clustering_scan(&states::maximally_mixed(n).unwrap(), &z, &far, &a, t).unwrap().values[0];
    let plus = purification_clustering_scan(&states::plus_product(n).unwrap(), &z, &far, &a, t).unwrap().values[0];
    check(
        round_trip <= 1e-10 && mixed >= 1.0 - 1e-10 && plus <= 1e-10,
        format!("round trip {round_trip:.1e} on 100 states; distance {}: mixed {mixed:.12}, plus {plus:.1e}", n - 1),
    )
}

fn criterion_8() -> Outcome {
    let mut discrepancy: f64 = 0.0;
    for k in 0..40u64 {
        let rho = states::random_state(&[2, 2, 2, 2], 1 + (k as usize % 16), 700 + k).unwrap();
        for r in [Region::new(vec![0]), Region::new(vec![0, 1]), Region::new(vec![1, 3])] {
            discrepancy = discrepancy.max(mutual_information(&rho, &r).unwrap().discrepancy);
        }
    }
    let n = 6;
    let product = DensityOperator::tensor(
        &states::random_state(&[2, 2, 2], 8, 1).unwrap(),
        &states::random_state(&[2, 2, 2], 3, 2).unwrap(),
    )
    .unwrap();
    let product_mi = mutual_information(&product, &Region::interval(0, 3)).unwrap().value().abs();
    let plus_mi = (1..n)
        .map(|c| mutual_information(&states::plus_product(n).unwrap(), &Region::interval(0, c)).unwrap().value().abs())
        .fold(0.0, f64::max);
    let ghz = states::ghz_mixture(n).unwrap();
    let ghz_dev = (1..n)
        .map(|c| (mutual_information(&ghz, &Region::interval(0, c)).unwrap().value() - 2f64.ln()).abs())
        .fold(0.0, f64::max);
    check(
        discrepancy <= 1e-8 && product_mi <= 1e-10 && plus_mi <= 1e-10 && ghz_dev <= 1e-10,
        format!(
            "path discrepancy {discrepancy:.1e}; product {product_mi:.1e}, plus {plus_mi:.1e}; GHZ mixture within {ghz_dev:.1e} of ln 2 at every cut"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut worst_in: f64 = 0.0;
    let mut worst_out: f64 = 0.0;
    for k in 0..100u64 {
        let n = 2 + (k as usize % 2);
        let a = SymmetryAction::z2_flip(n).unwrap();
        let ch = random_strongly_symmetric_channel(&a, ChainGeometry::qubits(1).unwrap(), 400 + k).unwrap();
        let raw = states::random_state(&vec![2; n], 1 + (k as usize % 4), 900 + k).unwrap();
        let flipped = a.conjugate_matrix(1, raw.matrix()).unwrap();
        let rho = DensityOperator::new(raw.geometry().clone(), (raw.matrix() + flipped) * c64(0.5, 0.0)).unwrap();
        worst_in = worst_in.max(weak_symmetry_defect(&rho, &a, 1).unwrap());
        let out = apply_channel(&ch, &rho).unwrap();
        worst_out = worst_out.max(weak_symmetry_defect(&out, &a, 1).unwrap());
    }
    check(worst_out <= 1e-9, format!("100 pairs: weak defect in {worst_in:.1e}, out {worst_out:.1e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("local indistinguishability of rho1 and rho2", criterion_1),
        ("charge-coherence classification", criterion_2),
        ("fidelity engine", criterion_3),
        ("cohomology", criterion_4),
        ("anomaly pipeline", criterion_5),
        ("cluster channel", criterion_6),
        ("purification diagnostics", criterion_7),
        ("mutual information", criterion_8),
        ("weak symmetry under strongly symmetric channels", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let wall = t.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("criterion {}: PASS  {name}: {d} [{wall:.2}s]", i + 1),
            Err(d) => {
                println!("criterion {}: FAIL  {name}: {d} [{wall:.2}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
