use proptest::prelude::*;
use qcorr::boundent::{b_expectations, detect, detection_threshold, inequality_value, sweep};
use qcorr::states;
use qcorr::DensityMatrix;

#[test]
fn expectation_examples() {
    let e = b_expectations(&states::sep().to_density()).unwrap();
    assert_eq!(e.map(|x| (x * 1e12).round() / 1e12), [0.0, 0.0, 1.0]);
    // |+⟩ ⊗ φ⁺ has ⟨IXX⟩ = 1, ⟨IYY⟩ = −1.
    let plus = qcorr::PureState::from_real(vec![2], &[1.0, 1.0].map(|x: f64| x / 2f64.sqrt())).unwrap();
    let e = b_expectations(&plus.tensor(&states::bell(1).unwrap()).to_density()).unwrap();
    assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] + 1.0).abs() < 1e-12 && e[2].abs() < 1e-12);
    // GHZ gives zero on all three: each word flips an odd number of qubits or has odd Z parity.
    let e = b_expectations(&states::ghz().to_density()).unwrap();
    assert!(e.iter().all(|x| x.abs() < 1e-12), "{e:?}");
    assert!(b_expectations(&states::bell(1).unwrap().to_density()).is_err());
}

#[test]
fn ququart_view_is_accepted() {
    let rho = states::horodecki_b(0.1).unwrap();
    let as_24 = DensityMatrix::new(vec![2, 4], rho.matrix().clone()).unwrap();
    assert_eq!(b_expectations(&rho).unwrap(), b_expectations(&as_24).unwrap());
}

#[test]
fn inequality_examples() {
    assert_eq!(inequality_value(0.0, 0.0, 0.0), 0.0);
    assert_eq!(inequality_value(1.0, -1.0, 0.0), 2.0);
    let e = detect(0.2).unwrap().expectations;
    assert!((inequality_value(e[0], e[1], e[2]) - 1.150).abs() < 1e-3);
    let e = b_expectations(&states::horodecki_b(0.04).unwrap()).unwrap();
    assert!((inequality_value(e[0], e[1], e[2]) - 2.311).abs() < 1e-3);
}

#[test]
fn detect_examples() {
    let r = detect(0.12).unwrap();
    assert!(r.violated && (r.inequality_value - 1.557).abs() < 1e-3);
    assert!(r.ppt_min_eig >= -1e-9 && r.negativity < 1e-12 && r.bound_entanglement_case);
    let r = detect(0.5).unwrap();
    assert!(!r.violated && r.inequality_value <= 1.0 && r.ppt_min_eig >= -1e-9);
    let r = detect(0.0).unwrap();
    assert!(!r.bound_entanglement_case);
    assert!(!detect(1.0).unwrap().bound_entanglement_case);
    assert!(detect(-0.1).is_err());
}

#[test]
fn threshold_is_inverse_root_seventeen() {
    let t = detection_threshold().unwrap();
    assert!((t - 1.0 / 17f64.sqrt()).abs() < 1e-3, "{t}");
    assert!(detect(t - 1e-4).unwrap().inequality_value > 1.0);
    assert!(detect(t + 1e-4).unwrap().inequality_value < 1.0);
}

#[test]
fn sweep_is_strictly_decreasing() {
    let rows = sweep(0.04, 0.5, 0.02).unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows.windows(2).all(|w| w[1].inequality_value < w[0].inequality_value));
    assert!(sweep(0.5, 0.1, 0.1).is_err());
    assert!(sweep(0.1, 0.5, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ppt_but_violated_below_threshold(b in 0.0f64..=1.0) {
        let r = detect(b).unwrap();
        prop_assert!(r.ppt_min_eig >= -1e-9);
        prop_assert!(r.negativity < 1e-9);
        if b > 1e-3 && b < 1.0 / 17f64.sqrt() - 1e-3 {
            prop_assert!(r.violated);
        }
    }

    #[test]
    fn inequality_sign_symmetry(e1 in -1.0f64..1.0, e2 in -1.0f64..1.0, e3 in -1.0f64..1.0) {
        let v = inequality_value(e1, e2, e3);
        for (s2, s3) in [(1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            prop_assert_eq!(inequality_value(e1, s2 * e2, s3 * e3), v);
        }
        prop_assert_eq!(inequality_value(-e1, -e2, -e3), v);
    }
}
