use proptest::prelude::*;
use qcorr::sdp::{feasibility, solve, verdict_for, SdpOptions, Verdict};
use qcorr::{ComplexMatrix, LmiBlock, LmiProblem, SdpStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn real(n: usize, v: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(n, n, v).unwrap()
}

/// `[[1 + x1, x2], [x2, 1 − x1]] ⪰ 0` is the unit disc.
fn disc(c: [f64; 2]) -> LmiProblem {
    let blk = LmiBlock {
        f0: ComplexMatrix::identity(2),
        fk: vec![real(2, &[1.0, 0.0, 0.0, -1.0]), real(2, &[0.0, 1.0, 1.0, 0.0])],
    };
    LmiProblem::new(c.to_vec(), vec![blk]).unwrap()
}

#[test]
fn scalar_lmi_minimum_at_boundary() {
    let blk = LmiBlock { f0: real(1, &[0.0]), fk: vec![real(1, &[1.0])] };
    let p = LmiProblem::new(vec![1.0], vec![blk]).unwrap();
    let s = solve(&p, &SdpOptions::default()).unwrap();
    assert_eq!(s.status, SdpStatus::Optimal);
    assert!(s.objective.abs() < 1e-7, "{}", s.objective);
}

#[test]
fn two_by_two_off_diagonal() {
    let blk = LmiBlock {
        f0: ComplexMatrix::identity(2),
        fk: vec![real(2, &[0.0, 1.0, 1.0, 0.0])],
    };
    let p = LmiProblem::new(vec![-1.0], vec![blk]).unwrap();
    let s = solve(&p, &SdpOptions::default()).unwrap();
    assert!((s.objective + 1.0).abs() < 1e-7, "{}", s.objective);
    assert!(s.min_block_eig > -1e-9);
}

#[test]
fn disc_minimum_is_minus_norm() {
    let s = solve(&disc([3.0, 4.0]), &SdpOptions::default()).unwrap();
    assert!((s.objective + 5.0).abs() < 1e-6);
    assert!((s.x[0] + 0.6).abs() < 1e-4 && (s.x[1] + 0.8).abs() < 1e-4);
}

#[test]
fn feasibility_of_constant_blocks() {
    let strict = LmiProblem::new(vec![], vec![LmiBlock { f0: ComplexMatrix::identity(3), fk: vec![] }]).unwrap();
    let r = feasibility(&strict, &SdpOptions::default()).unwrap();
    assert!((r.t_star + 1.0).abs() < 1e-6, "{}", r.t_star);
    assert!(r.feasible());

    let indefinite =
        LmiProblem::new(vec![], vec![LmiBlock { f0: ComplexMatrix::diag_real(&[1.0, -1.0]), fk: vec![] }]).unwrap();
    let r = feasibility(&indefinite, &SdpOptions::default()).unwrap();
    assert!((r.t_star - 1.0).abs() < 1e-6, "{}", r.t_star);
    assert_eq!(r.verdict, Verdict::Infeasible);
}

#[test]
fn feasibility_uses_the_variables() {
    // diag(x, −x − 1) needs x ≥ 0 and x ≤ −1 at once; best t is ½.
    let blk = LmiBlock {
        f0: ComplexMatrix::diag_real(&[0.0, -1.0]),
        fk: vec![ComplexMatrix::diag_real(&[1.0, -1.0])],
    };
    let p = LmiProblem::new(vec![0.0], vec![blk]).unwrap();
    let r = feasibility(&p, &SdpOptions::default()).unwrap();
    assert!((r.t_star - 0.5).abs() < 1e-6, "{}", r.t_star);
}

#[test]
fn verdict_bands() {
    assert_eq!(verdict_for(-0.3), Verdict::Feasible);
    assert_eq!(verdict_for(5e-7), Verdict::Feasible);
    assert_eq!(verdict_for(5e-5), Verdict::Inconclusive);
    assert_eq!(verdict_for(0.2), Verdict::Infeasible);
}

#[test]
fn mismatched_block_sizes_rejected() {
    let blk = LmiBlock { f0: ComplexMatrix::identity(2), fk: vec![ComplexMatrix::identity(3)] };
    assert!(LmiProblem::new(vec![1.0], vec![blk]).is_err());
}

#[test]
fn trace_is_recorded_as_json_lines() {
    let opts = SdpOptions { record_trace: true, ..Default::default() };
    let s = solve(&disc([1.0, 0.0]), &opts).unwrap();
    let lines = s.trace_jsonl();
    assert!(!s.trace.is_empty());
    for l in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(v.get("mu").is_some() && v.get("objective").is_some());
    }
}

#[test]
fn optimum_is_locally_optimal() {
    let p = disc([-1.0, 2.0]);
    let s = solve(&p, &SdpOptions::default()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for _ in 0..200 {
        let y = [s.x[0] + rng.random_range(-0.05..0.05), s.x[1] + rng.random_range(-0.05..0.05)];
        if p.min_eig_at(&y).unwrap() >= 0.0 {
            assert!(p.objective_at(&y) >= s.objective - 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn disc_optimum_matches_closed_form(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        prop_assume!(a.hypot(b) > 1e-2);
        let s = solve(&disc([a, b]), &SdpOptions::default()).unwrap();
        prop_assert!((s.objective + a.hypot(b)).abs() < 1e-6 * (1.0 + a.hypot(b)));
        prop_assert!(s.min_block_eig > -1e-9);
    }
}
