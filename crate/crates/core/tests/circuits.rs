use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qcorr::circuits::{
    cnot, controlled_hadamard, embed_single, expectation_via_mapping, hadamard_matrix, mapping_sign,
    parse_gate, rotation, rotation_matrix, rz_matrix, sequence_unitary, swap, MappingRegistry,
};
use qcorr::states;
use qcorr::{kron, ComplexMatrix, Pauli, PauliProductObservable, PureState, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// `min_φ ‖a − e^{iφ} b‖∞`, with φ fixed by the largest entry of `b`.
fn phase_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (i, j) = (0..b.rows())
        .flat_map(|i| (0..b.cols()).map(move |j| (i, j)))
        .max_by(|&(i, j), &(k, l)| b.get(i, j).norm().total_cmp(&b.get(k, l).norm()))
        .unwrap();
    let ph = a.get(i, j) / b.get(i, j);
    a.max_abs_diff(&b.scale(ph / ph.norm()))
}

fn basis(digits: &[usize]) -> PureState {
    PureState::basis(vec![2; digits.len()], digits).unwrap()
}

fn amp_close(a: &PureState, want: &[C64]) -> bool {
    a.amplitudes().iter().zip(want).all(|(x, y)| (x - y).norm() < 1e-12)
}

#[test]
fn rx_pi_flips_with_phase() {
    let g = rotation(0.0, PI, 0, 1).unwrap();
    let out = basis(&[0]).evolve(&g.unitary).unwrap();
    assert!(amp_close(&out, &[C64::new(0.0, 0.0), C64::new(0.0, -1.0)]));
}

#[test]
fn ry_half_pi_acts_like_hadamard() {
    let ry = rotation_matrix(FRAC_PI_2, FRAC_PI_2);
    // R_y(π/2) maps |0⟩ to |+⟩ exactly and |1⟩ to −|−⟩.
    let z = Pauli::Z.matrix();
    assert!(ry.matmul(&z).unwrap().max_abs_diff(&hadamard_matrix()) < 1e-15);
    let plus = ry.apply(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((plus[0].re - h).abs() < 1e-15 && (plus[1].re - h).abs() < 1e-15);
}

#[test]
fn composite_z_rotation_matches_direct() {
    for theta in [0.3, 1.0, PI, 2.5] {
        let composite = rotation_matrix(0.0, FRAC_PI_2)
            .matmul(&rotation_matrix(FRAC_PI_2, theta))
            .unwrap()
            .matmul(&rotation_matrix(0.0, -FRAC_PI_2))
            .unwrap();
        assert!(phase_distance(&composite, &rz_matrix(theta)) < 1e-12, "θ = {theta}");
    }
}

#[test]
fn cnot_basis_action() {
    let g = cnot(0, 1, 2).unwrap();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let out = basis(&[1, 0]).evolve(&g.unitary).unwrap();
    assert!(amp_close(&out, &[zero, zero, zero, one]));
    let out = basis(&[0, 0]).evolve(&g.unitary).unwrap();
    assert!(amp_close(&out, &[one, zero, zero, zero]));
    assert!(cnot(1, 1, 2).is_err());
    assert!(cnot(0, 2, 2).is_err());
}

#[test]
fn cnot_conjugates_zz_to_iz() {
    let g = cnot(0, 1, 2).unwrap().unitary;
    let zz = PauliProductObservable::paulis(&[Pauli::Z, Pauli::Z]).matrix();
    let iz = PauliProductObservable::paulis(&[Pauli::I, Pauli::Z]).matrix();
    let conj = g.matmul(&zz).unwrap().matmul(&g).unwrap();
    assert!(conj.max_abs_diff(&iz) < 1e-15);
}

#[test]
fn controlled_hadamard_branches() {
    let ch = controlled_hadamard(0, 1, 2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = PureState::from_real(vec![2, 2], &[0.6, 0.8, 0.0, 0.0]).unwrap();
    let out = psi.evolve(&ch.unitary).unwrap();
    assert!(amp_close(&out, psi.amplitudes()));
    let out = basis(&[1, 0]).evolve(&ch.unitary).unwrap();
    let want: Vec<C64> = [0.0, 0.0, h, h].iter().map(|&x| C64::new(x, 0.0)).collect();
    assert!(amp_close(&out, &want));
}

#[test]
fn controlled_hadamard_on_separable_example() {
    let sigma = states::ncc_sigma();
    let ch = controlled_hadamard(0, 1, 2).unwrap();
    let out = sigma.evolve(&ch.unitary).unwrap();
    let z2 = embed_single(&Pauli::Z.matrix(), 1, 2).unwrap();
    assert!((out.expect(&z2).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn gates_are_unitary_and_involutive() {
    let id4 = ComplexMatrix::identity(4);
    for g in [cnot(0, 1, 2).unwrap(), cnot(1, 0, 2).unwrap(), controlled_hadamard(1, 0, 2).unwrap()] {
        assert!(g.unitarity_error() < 1e-10, "{}", g.label);
        let sq = g.unitary.matmul(&g.unitary).unwrap();
        assert!(phase_distance(&sq, &id4) < 1e-12, "{}", g.label);
    }
    for label in ["X1", "Xb2", "Y3", "Yb1", "CNOT13", "CH32"] {
        assert!(parse_gate(label, 3).unwrap().unitarity_error() < 1e-10, "{label}");
    }
}

#[test]
fn swap_from_three_cnots() {
    let via = sequence_unitary("CNOT12.CNOT21.CNOT12", 2).unwrap();
    assert!(via.max_abs_diff(&swap(0, 1, 2).unwrap().unitary) < 1e-15);
    let a = ComplexMatrix::diag_real(&[1.0, 2.0]);
    let b = ComplexMatrix::diag_real(&[3.0, 4.0]);
    let s = swap(0, 1, 2).unwrap().unitary;
    let swapped = s.matmul(&kron(&a, &b)).unwrap().matmul(&s).unwrap();
    assert!(swapped.max_abs_diff(&kron(&b, &a)) < 1e-15);
}

#[test]
fn sequence_order_is_rightmost_first() {
    // "A.B" is A·B, so B acts first.
    let u = sequence_unitary("CNOT12.X1", 2).unwrap();
    let want = cnot(0, 1, 2).unwrap().then_after(&parse_gate("X1", 2).unwrap()).unwrap();
    assert!(u.max_abs_diff(&want.unitary) < 1e-15);
}

#[test]
fn mapping_examples() {
    let obs = |w: &str| w.parse::<PauliProductObservable>().unwrap();
    let phi_minus = states::bell(2).unwrap().to_density();
    assert!((expectation_via_mapping(&phi_minus, &obs("XX")).unwrap() + 1.0).abs() < 1e-12);
    let zero = states::sep().to_density();
    assert!((expectation_via_mapping(&zero, &obs("ZZZ")).unwrap() - 1.0).abs() < 1e-12);
    let w = states::w().to_density();
    assert!((expectation_via_mapping(&w, &obs("XXZ")).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    // Scaled observables carry their prefactor.
    let half = obs("XX").scaled(0.5);
    assert!((expectation_via_mapping(&phi_minus, &half).unwrap() + 0.5).abs() < 1e-12);
}

#[test]
fn unregistered_observables_fail() {
    let rho = states::bell(1).unwrap().to_density();
    assert!(expectation_via_mapping(&rho, &"II".parse().unwrap()).is_err());
    let qutrit: PauliProductObservable = "X".parse().unwrap();
    assert!(expectation_via_mapping(&rho, &qutrit).is_err());
}

#[test]
fn registries_cover_every_word() {
    assert_eq!(MappingRegistry::two_qubit().entries.len(), 15);
    assert_eq!(MappingRegistry::three_qubit().entries.len(), 63);
    for reg in [MappingRegistry::two_qubit(), MappingRegistry::three_qubit()] {
        for e in &reg.entries {
            assert!(e.sign.abs() == 1.0);
            assert_eq!(mapping_sign(&e.sequence, e.readout, &e.word()).unwrap(), Some(e.sign), "{}", e.id);
        }
    }
}

#[test]
fn registry_json_round_trip() {
    let reg = MappingRegistry::three_qubit();
    let back = MappingRegistry::from_json(&reg.to_json()).unwrap();
    assert_eq!(back.entries.len(), reg.entries.len());
    for (a, b) in back.entries.iter().zip(&reg.entries) {
        assert_eq!((&a.observable, &a.sequence, a.readout, a.sign), (&b.observable, &b.sequence, b.readout, b.sign));
    }
    let json = reg.to_json();
    let tampered = json.replacen("\"sign\": 1.0", "\"sign\": -1.0", 1);
    assert_ne!(tampered, json);
    assert!(MappingRegistry::from_json(&tampered).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mapping_matches_direct_expectation(seed in any::<u64>(), two in any::<bool>()) {
        let n = if two { 2 } else { 3 };
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rho = states::haar_random_state(&vec![2; n], &mut rng).unwrap().to_density();
        let reg = MappingRegistry::for_qubits(n).unwrap();
        for e in &reg.entries {
            let obs = PauliProductObservable::paulis(&e.word());
            let direct = rho.expect(&obs.matrix()).unwrap();
            prop_assert!((expectation_via_mapping(&rho, &obs).unwrap() - direct).abs() < 1e-9);
        }
    }
}
