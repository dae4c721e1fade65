use concurrence_core::{
    eof_from_sum_sq, lower_bound_fixed_basis, lower_bound_optimized, ppt_verdict, pure_concurrence,
    pure_concurrence_flip, random_induced_state, random_pure_state, random_unitary, tensor_product,
    upper_bound, BipartiteDims, ComplexMatrix, DensityMatrix, OptimizerConfig, PureState,
};
use proptest::prelude::*;

fn quick() -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(3)
}

fn dims_strategy() -> impl Strategy<Value = BipartiteDims> {
    (2usize..=4).prop_map(|k| BipartiteDims::new(2, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pure_forms_agree(n in 2usize..=3, k in 2usize..=4, seed in any::<u64>()) {
        let psi = random_pure_state::<f64>(BipartiteDims::new(n, k).unwrap(), seed);
        let c = pure_concurrence(&psi);
        prop_assert!((c - pure_concurrence_flip(&psi)).abs() < 1e-10);
        let m = n.min(k) as f64;
        prop_assert!(c >= 0.0 && c <= (2.0 * (1.0 - 1.0 / m)).sqrt() + 1e-12);
    }

    #[test]
    fn pure_concurrence_is_local_unitary_invariant(k in 2usize..=4, seed in any::<u64>()) {
        let dims = BipartiteDims::new(2, k).unwrap();
        let psi = random_pure_state::<f64>(dims, seed);
        let a = random_unitary::<f64>(2, seed ^ 1);
        let b = random_unitary::<f64>(k, seed ^ 2);
        let rotated = tensor_product(&a, &b).mul_vec(psi.amplitudes());
        let phi = PureState::new(rotated, dims).unwrap();
        prop_assert!((pure_concurrence(&phi) - pure_concurrence(&psi)).abs() < 1e-9);
    }

    #[test]
    fn fixed_basis_bound_ignores_qubit_rotations(dims in dims_strategy(), m in 1usize..=8, seed in any::<u64>()) {
        let rho = random_induced_state::<f64>(m, dims, seed).unwrap();
        let id = ComplexMatrix::identity(dims.k());
        let a = random_unitary::<f64>(2, seed.wrapping_add(17));
        let rotated = rho.local_rotation(&a, &id).unwrap();
        let before = lower_bound_fixed_basis(&rho, &id).unwrap().value;
        let after = lower_bound_fixed_basis(&rotated, &id).unwrap().value;
        prop_assert!((before - after).abs() < 1e-8, "{before} vs {after}");
    }

    #[test]
    fn ppt_spectrum_is_local_unitary_invariant(dims in dims_strategy(), m in 1usize..=8, seed in any::<u64>()) {
        let rho = random_induced_state::<f64>(m, dims, seed).unwrap();
        let a = random_unitary::<f64>(2, seed ^ 3);
        let b = random_unitary::<f64>(dims.k(), seed ^ 4);
        let rotated = rho.local_rotation(&a, &b).unwrap();
        let d = ppt_verdict(&rho).min_eigenvalue - ppt_verdict(&rotated).min_eigenvalue;
        prop_assert!(d.abs() < 1e-10);
    }

    #[test]
    fn eof_is_monotone_and_bounded(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (e_lo, e_hi) = (eof_from_sum_sq(lo).unwrap(), eof_from_sum_sq(hi).unwrap());
        prop_assert!(e_lo <= e_hi);
        prop_assert!((0.0..=1.0).contains(&e_hi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bounds_are_ordered(dims in dims_strategy(), m in 1usize..=6, seed in any::<u64>()) {
        let rho = random_induced_state::<f64>(m, dims, seed).unwrap();
        let cfg = quick().with_seed(seed);
        let id = ComplexMatrix::identity(dims.k());
        let standard = lower_bound_fixed_basis(&rho, &id).unwrap().value;
        let optimized = lower_bound_optimized(&rho, &cfg).unwrap().value;
        let ub = upper_bound(&rho, None, &cfg).unwrap().value;
        prop_assert!(standard <= optimized + 1e-9, "{standard} > {optimized}");
        prop_assert!(optimized <= ub + 1e-6, "{optimized} > {ub}");
    }

    #[test]
    fn optimized_bound_ignores_local_rotations(m in 1usize..=6, seed in any::<u64>()) {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let rho = random_induced_state::<f64>(m, dims, seed).unwrap();
        let a = random_unitary::<f64>(2, seed ^ 5);
        let b = random_unitary::<f64>(3, seed ^ 6);
        let rotated = rho.local_rotation(&a, &b).unwrap();
        let cfg = OptimizerConfig::default().with_seed(seed);
        let x = lower_bound_optimized(&rho, &cfg).unwrap().value;
        let y = lower_bound_optimized(&rotated, &cfg).unwrap().value;
        prop_assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn pure_state_bounds_collapse() {
    let dims = BipartiteDims::new(2, 3).unwrap();
    for seed in 0..5 {
        let psi = random_pure_state::<f64>(dims, seed);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let c = pure_concurrence(&psi);
        let ub = upper_bound(&rho, None, &quick()).unwrap().value;
        let lb = lower_bound_optimized(&rho, &quick()).unwrap().value;
        assert!((ub - c).abs() < 1e-10, "ub {ub} vs {c}");
        assert!(lb <= c + 1e-9);
    }
}

#[test]
fn maximally_mixed_state_has_no_entanglement() {
    for k in 2..=4 {
        let rho = DensityMatrix::<f64>::maximally_mixed(BipartiteDims::new(2, k).unwrap());
        assert_eq!(lower_bound_optimized(&rho, &quick()).unwrap().value, 0.0);
        assert!(upper_bound(&rho, None, &quick()).unwrap().value < 1e-6);
        assert!(!ppt_verdict(&rho).verdict.is_entangled());
    }
}
