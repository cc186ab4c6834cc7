use proptest::prelude::*;
use qcorr::states;
use qcorr::tensor::{self, eigenvalues, min_eigenvalue, permute_subsystems};
use qcorr::{
    hermitian_eig, kron, partial_trace_op, partial_transpose_op, psd_sqrt, realign,
    singular_values, trace_norm, ComplexMatrix, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn real(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows, cols, v).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

#[test]
fn kron_of_small_blocks() {
    let a = real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
    let id = ComplexMatrix::identity(2);
    let k = kron(&a, &id);
    let want = real(
        4,
        4,
        &[1.0, 0.0, 2.0, 0.0, 0.0, 1.0, 0.0, 2.0, 3.0, 0.0, 4.0, 0.0, 0.0, 3.0, 0.0, 4.0],
    );
    assert!(k.max_abs_diff(&want) < 1e-15);
    let row = real(1, 2, &[1.0, -1.0]);
    assert_eq!(kron(&row, &row).rows(), 1);
    assert_eq!(kron(&row, &a).cols(), 4);
}

#[test]
fn bell_marginal_is_maximally_mixed() {
    let rho = states::bell(1).unwrap().to_density();
    let red = partial_trace_op(rho.matrix(), &[2, 2], &[0]).unwrap();
    assert!(red.max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-15);
}

#[test]
fn w_single_qubit_marginal() {
    let rho = states::w().to_density();
    let red = partial_trace_op(rho.matrix(), &[2, 2, 2], &[0]).unwrap();
    assert!(red.max_abs_diff(&ComplexMatrix::diag_real(&[2.0 / 3.0, 1.0 / 3.0])) < 1e-14);
}

#[test]
fn partial_trace_rejects_bad_dims() {
    let rho = states::bell(1).unwrap().to_density();
    assert!(partial_trace_op(rho.matrix(), &[2, 3], &[0]).is_err());
    assert!(partial_trace_op(rho.matrix(), &[2, 2], &[2]).is_err());
}

#[test]
fn phi_minus_partial_transpose_spectrum() {
    let rho = states::bell(2).unwrap().to_density();
    let mut ev = eigenvalues(&partial_transpose_op(rho.matrix(), &[2, 2], 0).unwrap()).unwrap();
    ev.sort_by(f64::total_cmp);
    assert!(close(&ev, &[-0.5, 0.5, 0.5, 0.5], 1e-12), "{ev:?}");
}

#[test]
fn eig_of_pauli_x_and_diagonal() {
    let x = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    assert!(close(&eigenvalues(&x).unwrap(), &[-1.0, 1.0], 1e-14));
    let d = ComplexMatrix::diag_real(&[3.0, -2.0, 0.5]);
    assert!(close(&eigenvalues(&d).unwrap(), &[-2.0, 0.5, 3.0], 1e-14));
}

#[test]
fn eig_reconstructs_random_hermitian() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for d in [2, 3, 6, 8] {
        let h = states::random_mixed(&[d], d, &mut rng).unwrap().into_matrix();
        let e = hermitian_eig(&h).unwrap();
        assert!(e.reconstruct_with(|x| x).max_abs_diff(&h) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn eig_rejects_non_hermitian() {
    let m = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(hermitian_eig(&m).is_err());
}

#[test]
fn singular_value_examples() {
    assert!(close(&singular_values(&ComplexMatrix::identity(3)), &[1.0; 3], 1e-14));
    assert!(close(&singular_values(&ComplexMatrix::zeros(2, 3)), &[0.0; 2], 1e-14));
    let rho = states::bell(1).unwrap().to_density();
    let r = realign(rho.matrix(), 2, 2).unwrap();
    assert!(close(&singular_values(&r), &[0.5; 4], 1e-12));
    let rect = real(2, 3, &[3.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
    assert!(close(&singular_values(&rect), &[4.0, 3.0], 1e-13));
}

#[test]
fn trace_norm_examples() {
    assert!((trace_norm(&ComplexMatrix::diag_real(&[1.0, -2.0])) - 3.0).abs() < 1e-14);
    let rho = states::bell(2).unwrap().to_density();
    let pt = partial_transpose_op(rho.matrix(), &[2, 2], 1).unwrap();
    assert!((trace_norm(&pt) - 2.0).abs() < 1e-12);
    let nilpotent = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!((trace_norm(&nilpotent) - 1.0).abs() < 1e-13);
}

#[test]
fn psd_sqrt_examples() {
    let d = ComplexMatrix::diag_real(&[4.0, 9.0]);
    assert!(psd_sqrt(&d).unwrap().max_abs_diff(&ComplexMatrix::diag_real(&[2.0, 3.0])) < 1e-13);
    assert!(psd_sqrt(&ComplexMatrix::diag_real(&[1.0, -1.0])).is_err());
    let rho = states::w().to_density();
    let s = psd_sqrt(rho.matrix()).unwrap();
    assert!(s.matmul(&s).unwrap().max_abs_diff(rho.matrix()) < 1e-12);
}

#[test]
fn permute_swaps_product_factors() {
    let a = ComplexMatrix::diag_real(&[1.0, 2.0]);
    let b = ComplexMatrix::diag_real(&[3.0, 5.0, 7.0]);
    let swapped = permute_subsystems(&kron(&a, &b), &[2, 3], &[1, 0]).unwrap();
    assert!(swapped.max_abs_diff(&kron(&b, &a)) < 1e-15);
}

#[test]
fn cholesky_only_for_positive_definite() {
    assert!(tensor::cholesky(&ComplexMatrix::diag_real(&[1.0, 2.0])).is_some());
    assert!(tensor::cholesky(&ComplexMatrix::diag_real(&[1.0, 0.0])).is_none());
}

fn random_state(seed: u64, dims: &[usize]) -> qcorr::DensityMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let d: usize = dims.iter().product();
    states::random_mixed(dims, d, &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), part in 0usize..2) {
        let rho = random_state(seed, &[2, 3]);
        let once = partial_transpose_op(rho.matrix(), &[2, 3], part).unwrap();
        let twice = partial_transpose_op(&once, &[2, 3], part).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
        prop_assert!((once.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_keeps_trace_and_positivity(seed in any::<u64>()) {
        let rho = random_state(seed, &[2, 2, 2]);
        for keep in [vec![0], vec![1, 2], vec![0, 2]] {
            let red = partial_trace_op(rho.matrix(), &[2, 2, 2], &keep).unwrap();
            prop_assert!((red.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(min_eigenvalue(&red).unwrap() > -1e-12);
        }
    }

    #[test]
    fn kron_commutes_with_partial_trace(seed in any::<u64>()) {
        let a = random_state(seed, &[2]);
        let b = random_state(seed.wrapping_add(1), &[3]);
        let ab = kron(a.matrix(), b.matrix());
        prop_assert!(partial_trace_op(&ab, &[2, 3], &[0]).unwrap().max_abs_diff(a.matrix()) < 1e-13);
        prop_assert!(partial_trace_op(&ab, &[2, 3], &[1]).unwrap().max_abs_diff(b.matrix()) < 1e-13);
    }

    #[test]
    fn trace_norm_of_state_is_one(seed in any::<u64>()) {
        let rho = random_state(seed, &[4]);
        prop_assert!((trace_norm(rho.matrix()) - 1.0).abs() < 1e-12);
        let sv: f64 = singular_values(rho.matrix()).iter().sum();
        prop_assert!((sv - 1.0).abs() < 1e-12);
    }
}
