use std::f64::consts::PI;

use proptest::prelude::*;
use qcorr::measures::{discord_side, Side};
use qcorr::states::{self, TwoParamQubitQutrit};
use qcorr::witnesses::*;
use qcorr::{DensityMatrix, Pauli, PauliProductObservable};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn sigma_ops() -> Vec<PauliProductObservable> {
    [Pauli::X, Pauli::Y, Pauli::Z]
        .iter()
        .map(|&p| PauliProductObservable::paulis(&[p, p]))
        .collect()
}

fn moments(rho: &DensityMatrix, ops: &[PauliProductObservable]) -> Vec<f64> {
    ops.iter().map(|o| rho.expect(&o.matrix()).unwrap()).collect()
}

fn sep_check(w: &WitnessReport, dims: &[usize], n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let s = states::random_separable(dims, 3, &mut rng).unwrap();
            s.expect(&w.witness).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn bell_phi_minus_reaches_minus_half() {
    let r = witness_sdp(&sigma_ops(), &[-1.0, 1.0, 1.0]).unwrap();
    assert!((r.min_ctm + 0.5).abs() < 1e-6, "{}", r.min_ctm);
    assert!(r.detected);
    let rebuilt = &r.p + &qcorr::partial_transpose_op(&r.q, &[2, 2], 0).unwrap();
    assert!(rebuilt.max_abs_diff(&r.witness) < 1e-8);
    assert!((r.witness.trace().re - 1.0).abs() < 1e-12);
    assert!(qcorr::tensor::min_eigenvalue(&r.p).unwrap() > -1e-8);
    assert!(qcorr::tensor::min_eigenvalue(&r.q).unwrap() > -1e-8);
}

#[test]
fn half_scaled_operators_agree() {
    let ops: Vec<_> = sigma_ops().into_iter().map(|o| o.scaled(0.5)).collect();
    let r = witness_sdp(&ops, &[-0.5, 0.5, 0.5]).unwrap();
    assert!((r.min_ctm + 0.5).abs() < 1e-6);
}

#[test]
fn product_state_not_detected() {
    let r = witness_sdp(&sigma_ops(), &[0.0, 0.0, 1.0]).unwrap();
    assert!(r.min_ctm >= -1e-6, "{}", r.min_ctm);
    assert!(!r.detected);
}

#[test]
fn weak_schmidt_state_detected() {
    let rho = states::e_theta(3.0 * PI / 30.0).unwrap().to_density();
    let r = witness_sdp(&sigma_ops(), &moments(&rho, &sigma_ops())).unwrap();
    assert!(r.detected, "{}", r.min_ctm);
}

#[test]
fn pt_side_flag_gives_same_optimum() {
    let opts = WitnessOptions { pt_side: 1, ..Default::default() };
    let r = witness_sdp_with(&sigma_ops(), &[-1.0, 1.0, 1.0], &opts).unwrap();
    assert_eq!(r.pt_side, 1);
    assert!((r.min_ctm + 0.5).abs() < 1e-6);
}

#[test]
fn dependent_operators_rejected() {
    let mut ops = sigma_ops();
    ops.push(ops[0].scaled(2.0));
    assert!(witness_sdp(&ops, &[-1.0, 1.0, 1.0, -2.0]).is_err());
    assert!(witness_sdp(&sigma_ops(), &[1.0]).is_err());
}

#[test]
fn detected_witness_is_valid_on_separable_states() {
    let r = witness_sdp(&sigma_ops(), &[-1.0, 1.0, 1.0]).unwrap();
    assert!(sep_check(&r, &[2, 2], 500, 99) >= -1e-6);
    let rho = states::qubit_qutrit(&TwoParamQubitQutrit::new(0.1, 0.7).unwrap()).unwrap();
    let ops = correlation_operators(&[2, 3]).unwrap();
    let r = witness_sdp(&ops, &moments(&rho, &ops)).unwrap();
    assert!(r.detected);
    assert!(sep_check(&r, &[2, 3], 500, 98) >= -1e-6);
}

#[test]
fn protocol_detects_bell_quickly() {
    for k in 1..=4 {
        let rho = states::bell(k).unwrap().to_density();
        for seed in [1, 7, 1234] {
            let r = random_measurement_protocol(&rho, seed, &ProtocolOptions::default()).unwrap();
            assert!(r.detected && r.rounds <= 3, "bell{k}: {} rounds", r.rounds);
        }
    }
}

#[test]
fn protocol_never_detects_separable() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for seed in 0..5 {
        let rho = states::random_separable(&[2, 2], 4, &mut rng).unwrap();
        let opts = ProtocolOptions { max_rounds: 6, ..Default::default() };
        let r = random_measurement_protocol(&rho, seed, &opts).unwrap();
        assert!(!r.detected && r.min_ctm >= -1e-6, "{}", r.min_ctm);
        assert_eq!(r.rounds, 6);
    }
}

#[test]
fn protocol_qubit_qutrit() {
    let rho = states::qubit_qutrit(&TwoParamQubitQutrit::new(0.1, 0.6).unwrap()).unwrap();
    let r = random_measurement_protocol(&rho, 3, &ProtocolOptions::default()).unwrap();
    assert!(r.detected, "{}", r.min_ctm);
}

#[test]
fn random_observables_are_dichotomic() {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    for dims in [vec![2, 2], vec![2, 3]] {
        let o = random_local_observable(&dims, &mut rng).unwrap();
        let m = o.matrix();
        assert!(m.is_hermitian(1e-12));
        assert_eq!(m.rows(), dims.iter().product::<usize>());
    }
}

#[test]
fn qubit_qutrit_witness_decomposition() {
    let (w, d) = qubit_qutrit_witness();
    assert_eq!(d.nonzero(1e-12), vec!["v8", "beta11", "beta22", "beta33"]);
    assert!(d.u.iter().all(|x| x.abs() < 1e-12));
    assert!((d.v[7] - 0.5).abs() < 1e-12);
    for i in 0..3 {
        assert!((d.beta[i][i] - 1.5).abs() < 1e-12);
    }
    assert!(d.reconstruct().max_abs_diff(&w) < 1e-12);

    let on = |a: f64, g: f64| {
        let rho = states::qubit_qutrit(&TwoParamQubitQutrit::new(a, g).unwrap()).unwrap();
        rho.expect(&w).unwrap()
    };
    assert!(on(0.0, 1.0) < 0.0);
    assert!(on(0.5, 0.0) >= -1e-12);
}

#[test]
fn printed_qubit_qutrit_matrix_is_not_a_witness() {
    let printed = qubit_qutrit_witness_as_printed();
    let d = QubitQutritDecomposition::of(&printed).unwrap();
    assert_eq!(d.nonzero(1e-12), vec!["v3", "v8", "beta11", "beta22", "beta33", "beta38"]);
    // Negative on the product (|0⟩ + |1⟩)/√2 ⊗ (|0⟩ − |1⟩)/√2.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = qcorr::PureState::from_real(vec![2], &[h, h]).unwrap();
    let b = qcorr::PureState::from_real(vec![3], &[h, -h, 0.0]).unwrap();
    assert!(a.tensor(&b).expect(&printed).unwrap() < -1e-3);
}

#[test]
fn detection_fractions_per_subset_size() {
    let f = |n: usize| detection_fraction(n, 50_000, 1, SampleRegion::PlotRectangle).unwrap();
    let all = f(4);
    assert!((all.best - 1.0).abs() < 1e-12 && all.subsets.len() == 1);
    let one = f(1);
    assert_eq!(one.subsets.len(), 4);
    assert!((one.best - 0.50).abs() < 0.02, "{}", one.best);
    let two = f(2);
    assert_eq!(two.subsets.len(), 6);
    assert!(two.subsets.iter().any(|s| (s.fraction - 2.0 / 3.0).abs() < 0.02));
    // Best size-3 subsets reach ~0.926, not the 0.833 one might expect.
    let three = f(3);
    assert!((three.best - 0.926).abs() < 0.01, "{}", three.best);
    assert!(three.subsets.iter().all(|s| (s.fraction - 0.833).abs() > 0.02));
    assert!(detection_fraction(5, 10, 1, SampleRegion::PlotRectangle).is_err());
}

#[test]
fn detection_fraction_is_seed_stable() {
    let a = detection_fraction(2, 20_000, 5, SampleRegion::PhysicalTriangle).unwrap();
    let b = detection_fraction(2, 20_000, 5, SampleRegion::PhysicalTriangle).unwrap();
    assert_eq!(a.best, b.best);
    assert_eq!(a.entangled_samples, b.entangled_samples);
}

#[test]
fn ncc_constant() {
    let c = ncc_c_opt();
    assert!((c.c_opt - 0.182138).abs() < 1e-6);
    assert!((c.a_hat - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-15);
    let s = ncc_c_opt_search();
    assert!((s.c_opt - c.c_opt).abs() < 1e-12);
    let grid = (0..=100_000)
        .map(|k| {
            let a = k as f64 / 100_000.0;
            a * (1.0 + 2.0 * (a * (1.0 - a)).sqrt()) / 8.0
        })
        .fold(f64::MIN, f64::max);
    assert!((grid - c.c_opt).abs() < 1e-8);
}

#[test]
fn ncc_map_examples() {
    let sigma = states::ncc_sigma();
    let mv = ncc_map_value(&sigma).unwrap();
    assert!((mv + 0.067862).abs() < 1e-6, "{mv}");
    let classical = DensityMatrix::mixture(&[
        (0.5, &qcorr::PureState::basis(vec![2, 2], &[0, 0]).unwrap().to_density()),
        (0.5, &qcorr::PureState::basis(vec![2, 2], &[1, 1]).unwrap().to_density()),
    ])
    .unwrap();
    assert!(ncc_map_value(&classical).unwrap() >= 0.0);
    let dephased = states::dephase(&sigma, 1, 1.0).unwrap();
    assert!((ncc_map_value(&dephased).unwrap() - 0.0571).abs() < 1e-4);
    assert!(ncc_map_value(&states::ghz().to_density()).is_err());
}

#[test]
fn ncc_magnetization_form() {
    let sigma = states::ncc_sigma();
    let (z1, z2, z2p) = ncc_circuit_magnetizations(&sigma).unwrap();
    assert!(z1.abs() < 1e-12 && (z2 - 1.0).abs() < 1e-12 && z2p.abs() < 1e-12);
    assert!((ncc_map_from_magnetizations(0.0, 1.0, 0.0).unwrap() + 0.067862).abs() < 1e-6);
    assert!((ncc_map_from_magnetizations(1.0, 1.0, 1.0).unwrap() - ncc_c_opt().c_opt).abs() < 1e-15);
    assert!(ncc_map_from_magnetizations(1.5, 0.0, 0.0).is_err());
}

#[test]
fn ncc_dephasing_dynamics() {
    let sigma = states::ncc_sigma();
    let pts = mv_dynamics(&sigma, &[0.0, 0.5, 0.7, 1.0]).unwrap();
    assert!((pts[0].mv + 0.067862).abs() < 1e-6);
    assert!(pts.windows(2).all(|w| w[1].mv > w[0].mv));
    let lambda_star = mv_sign_change(&sigma).unwrap().unwrap();
    assert!((lambda_star - (2.0 - 8.0 * ncc_c_opt().c_opt)).abs() < 1e-9);
    // Past λ* the map no longer flags the state while discord on B is still present.
    assert!(pts[2].lambda > lambda_star && pts[2].mv > 0.0 && pts[2].discord > 1e-3);
    // Full dephasing leaves a product-basis diagonal state.
    assert!(pts[3].mv > 0.0 && pts[3].discord < 1e-9);
    assert!((pts[0].discord - discord_side(&sigma, Side::B).unwrap().discord).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn magnetization_route_equals_direct_map(seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rho = states::random_mixed(&[2, 2], 4, &mut rng).unwrap();
        let (z1, z2, z2p) = ncc_circuit_magnetizations(&rho).unwrap();
        let via = ncc_map_from_magnetizations(z1, z2, z2p).unwrap();
        prop_assert!((via - ncc_map_value(&rho).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn product_eigenbasis_states_are_not_flagged(seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let u = qcorr::kron(&states::haar_unitary(2, &mut rng), &states::haar_unitary(2, &mut rng));
        let p: Vec<f64> = (0..4).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
        let s: f64 = p.iter().sum();
        let diag = qcorr::ComplexMatrix::diag_real(&p.iter().map(|x| x / s).collect::<Vec<_>>());
        let rho = DensityMatrix::new(vec![2, 2], diag).unwrap().evolve(&u).unwrap();
        prop_assert!(ncc_map_value(&rho).unwrap() >= -1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn optimum_is_invariant_under_rescaling(scale in 0.1f64..5.0, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rho = states::random_mixed(&[2, 2], 2, &mut rng).unwrap();
        let ops = sigma_ops();
        let base = witness_sdp(&ops, &moments(&rho, &ops)).unwrap();
        let scaled: Vec<_> = ops.iter().map(|o| o.scaled(scale)).collect();
        let r = witness_sdp(&scaled, &moments(&rho, &scaled)).unwrap();
        prop_assert!((r.min_ctm - base.min_ctm).abs() < 1e-6);
    }
}
