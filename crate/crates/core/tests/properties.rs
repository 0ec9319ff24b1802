use proptest::prelude::*;

use symscope_core::channels::{apply_channel, compose_channels, random_channel, random_strongly_symmetric_channel};
use symscope_core::cohomology::{coboundary, is_coboundary, projective_2cocycle, same_class, Cochain};
use symscope_core::diagnostics::{classify, fidelity, Thresholds};
use symscope_core::group::GroupTable;
use symscope_core::linalg::{self, c64, named_matrix, CMatrix};
use symscope_core::phase::Phase;
use symscope_core::spin::states;
use symscope_core::spin::{ChainGeometry, DensityOperator, Region};
use symscope_core::symmetry::action::SymmetryAction;
use symscope_core::symmetry::charge::group_average;
use symscope_core::symmetry::defects::{strong_defect_matrices, weak_symmetry_defect};

fn group(k: usize) -> GroupTable {
    match k {
        0 => GroupTable::cyclic(2).unwrap(),
        1 => GroupTable::cyclic(3).unwrap(),
        2 => GroupTable::cyclic(4).unwrap(),
        _ => GroupTable::z2xz2(),
    }
}

fn cochain(g: &GroupTable, degree: usize, nums: &[i64], den: i64) -> Cochain {
    Cochain::from_fn(g, degree, |args| {
        let i = args.iter().fold(0, |acc, &a| acc * g.order() + a);
        Phase::new(nums[i % nums.len()], den)
    })
}

/// `(𝕀 + ∏X) / 2`.
fn even_sector(a: &SymmetryAction) -> CMatrix {
    let u = a.unitary(1).unwrap();
    (linalg::identity(u.nrows()) + u) * c64(0.5, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coboundary_squares_to_zero(k in 0usize..4, degree in 0usize..3, nums in prop::collection::vec(0i64..60, 1..20), den in 1i64..60) {
        let g = group(k);
        let c = cochain(&g, degree, &nums, den);
        prop_assert!(coboundary(&coboundary(&c)).is_zero());
    }

    #[test]
    fn coboundaries_are_trivialized(k in 0usize..4, degree in 1usize..3, nums in prop::collection::vec(0i64..60, 1..20), den in 1i64..60) {
        let g = group(k);
        let c = coboundary(&cochain(&g, degree, &nums, den));
        let eta = is_coboundary(&c).unwrap();
        prop_assert!(eta.is_some_and(|e| coboundary(&e) == c));
    }

    #[test]
    fn rephasing_keeps_projective_class(phases in prop::collection::vec(0i64..16, 4)) {
        let g = GroupTable::z2xz2();
        let paulis: Vec<CMatrix> = ["I", "X", "Y", "Z"].iter().map(|s| named_matrix(s).unwrap()).collect();
        let rephased: Vec<CMatrix> =
            paulis.iter().zip(&phases).map(|(m, &p)| m * Phase::new(p, 16).to_complex()).collect();
        let w0 = projective_2cocycle(&g, &paulis, None).unwrap();
        let w1 = projective_2cocycle(&g, &rephased, Some(64)).unwrap();
        prop_assert!(same_class(&w0, &w1).unwrap());
    }

    #[test]
    fn phase_addition_is_a_group(a in -50i64..50, b in -50i64..50, c in -50i64..50, p in 1i64..30, q in 1i64..30) {
        let (x, y, z) = (Phase::new(a, p), Phase::new(b, q), Phase::new(c, p * q));
        prop_assert_eq!((x + y) + z, x + (y + z));
        prop_assert_eq!(x + y, y + x);
        prop_assert!((x - x).is_zero());
        prop_assert!(x.turns() >= 0.0 && x.turns() < 1.0);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(rank_a in 1usize..5, rank_b in 1usize..5, seed in 0u64..10_000) {
        let a = states::random_state(&[2, 2], rank_a, seed).unwrap();
        let b = states::random_state(&[2, 2], rank_b, seed + 1).unwrap();
        let f = fidelity(&a, &b).unwrap().value;
        prop_assert!((-1e-12..=1.0 + 1e-10).contains(&f));
        prop_assert!((f - fidelity(&b, &a).unwrap().value).abs() < 1e-10);
        prop_assert!((fidelity(&a, &a).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_grows_under_restriction(rank_a in 1usize..9, rank_b in 1usize..9, seed in 0u64..10_000, site in 0usize..3) {
        let a = states::random_state(&[2, 2, 2], rank_a, seed).unwrap();
        let b = states::random_state(&[2, 2, 2], rank_b, seed + 7).unwrap();
        let r = Region::new(vec![site]);
        let small = fidelity(&a.restrict(&r).unwrap(), &b.restrict(&r).unwrap()).unwrap().value;
        prop_assert!(small + 1e-9 >= fidelity(&a, &b).unwrap().value);
    }

    #[test]
    fn random_channels_are_cptp(seed in 0u64..10_000, n in 1usize..3) {
        let ch = random_channel(ChainGeometry::qubits(n).unwrap(), ChainGeometry::qubits(1).unwrap(), seed).unwrap();
        let check = ch.validate_cptp().unwrap();
        prop_assert!(check.min_eigenvalue >= -1e-10 && check.trace_preservation_defect <= 1e-10);
        let rho = states::random_state(&vec![2; n], 1 << n, seed + 3).unwrap();
        let out = apply_channel(&ch, &rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-10);
        prop_assert!(out.eigenvalues().iter().all(|&e| e >= -1e-10));
    }

    #[test]
    fn composition_is_associative(seed in 0u64..10_000) {
        let sys = ChainGeometry::qubits(1).unwrap();
        let bath = ChainGeometry::qubits(1).unwrap();
        let a = random_channel(sys.clone(), bath.clone(), seed).unwrap();
        let b = random_channel(sys.clone(), bath.clone(), seed + 1).unwrap();
        let c = random_channel(sys, bath, seed + 2).unwrap();
        let left = compose_channels(&compose_channels(&a, &b).unwrap(), &c).unwrap();
        let right = compose_channels(&a, &compose_channels(&b, &c).unwrap()).unwrap();
        let rho = states::random_state(&[2], 2, seed + 5).unwrap();
        let seq = apply_channel(&c, &apply_channel(&b, &apply_channel(&a, &rho).unwrap()).unwrap()).unwrap();
        let l = apply_channel(&left, &rho).unwrap();
        let r = apply_channel(&right, &rho).unwrap();
        prop_assert!(linalg::max_abs_diff(l.matrix(), r.matrix()) < 1e-12);
        prop_assert!(linalg::max_abs_diff(l.matrix(), seq.matrix()) < 1e-12);
    }

    #[test]
    fn weak_symmetry_survives_strongly_symmetric_channels(seed in 0u64..10_000, n in 1usize..4) {
        let a = SymmetryAction::z2_flip(n).unwrap();
        let ch = random_strongly_symmetric_channel(&a, ChainGeometry::qubits(1).unwrap(), seed).unwrap();
        let raw = states::random_state(&vec![2; n], 1 << n, seed + 11).unwrap();
        let twirled = (raw.matrix() + a.conjugate_matrix(1, raw.matrix()).unwrap()) * c64(0.5, 0.0);
        let rho = DensityOperator::new(raw.geometry().clone(), twirled).unwrap();
        prop_assert!(weak_symmetry_defect(&rho, &a, 1).unwrap() < 1e-12);
        let out = apply_channel(&ch, &rho).unwrap();
        prop_assert!(weak_symmetry_defect(&out, &a, 1).unwrap() <= 1e-9);
    }

    #[test]
    fn joint_state_keeps_strong_symmetry(seed in 0u64..10_000, n in 1usize..4) {
        let a = SymmetryAction::z2_flip(n).unwrap();
        let ch = random_strongly_symmetric_channel(&a, ChainGeometry::qubits(1).unwrap(), seed).unwrap();
        // even sector of a random state: U ρ = ρ
        let raw = states::random_state(&vec![2; n], 1 << n, seed + 13).unwrap();
        let p = even_sector(&a);
        let sector = &p * raw.matrix() * &p;
        let rho = DensityOperator::new(raw.geometry().clone(), sector).unwrap().normalized().unwrap();
        let joint = ch.joint_state(&rho).unwrap();
        let u_rho = a.circuit_of(1).apply_left(ch.joint_geometry(), joint.matrix()).unwrap();
        prop_assert!(strong_defect_matrices(joint.matrix(), &u_rho) <= 1e-9);
    }

    #[test]
    fn group_average_is_invariant_and_idempotent(seed in 0u64..10_000) {
        let a = SymmetryAction::z2_flip(3).unwrap();
        let m = states::random_state(&[2, 2], 4, seed).unwrap().matrix().clone();
        let op = symscope_core::spin::LocalOperator::new(vec![0, 1], vec![2, 2], m).unwrap();
        let avg = group_average(&a, &op).unwrap();
        prop_assert!(group_average(&a, &avg).unwrap().distance(&avg).unwrap() < 1e-12);
        prop_assert!(a.apply(1, &avg).unwrap().distance(&avg).unwrap() < 1e-12);
    }

    #[test]
    fn verdicts_follow_from_values(values in prop::collection::vec(0.0f64..1.0, 1..8)) {
        let t = Thresholds::default();
        let v = classify(&values, &t);
        prop_assert_eq!(v, classify(&values, &t));
    }
}
