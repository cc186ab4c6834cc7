//! PPT-entanglement test for the qubit–ququart family `σ_b`, with the ququart stored as
//! two qubits. Three Pauli correlators feed four sign-choice inequalities.

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::measures::{negativity, ppt_check};
use crate::pauli::PauliProductObservable;
use crate::states::horodecki_b;

/// Inequality values above `1 + VIOLATION_TOL` count as violations.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntReport {
    pub b: f64,
    pub expectations: [f64; 3],
    pub inequality_value: f64,
    pub violated: bool,
    pub ppt_min_eig: f64,
    pub negativity: f64,
    /// `0 < b < 1`: the endpoints are separable (b = 0) or outside the PPT-entangled range.
    pub bound_entanglement_case: bool,
}

/// `(⟨I σx σx⟩, ⟨I σy σy⟩, ⟨σz σz σz⟩)`; a `[2, 4]` state is read as `[2, 2, 2]`.
pub fn b_expectations(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dims() != [2, 2, 2] && rho.dims() != [2, 4] {
        return Err(Error::arg(
            "boundent",
            format!("2⊗4 state required, got dims {:?}", rho.dims()),
        ));
    }
    let mut out = [0.0; 3];
    for (slot, word) in out.iter_mut().zip(["IXX", "IYY", "ZZZ"]) {
        let obs: PauliProductObservable = word.parse()?;
        *slot = rho.expect(&obs.matrix())?;
    }
    Ok(out)
}

/// `max |e1 ± e2 ± e3|` over the four sign choices.
pub fn inequality_value(e1: f64, e2: f64, e3: f64) -> f64 {
    [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .iter()
        .map(|(s2, s3)| (e1 + s2 * e2 + s3 * e3).abs())
        .fold(0.0, f64::max)
}

pub fn detect(b: f64) -> Result<BoundEntReport> {
    let rho = horodecki_b(b)?;
    let e = b_expectations(&rho)?;
    let value = inequality_value(e[0], e[1], e[2]);
    Ok(BoundEntReport {
        b,
        expectations: e,
        inequality_value: value,
        violated: value > 1.0 + VIOLATION_TOL,
        ppt_min_eig: ppt_check(&rho, 0)?.min_eig,
        negativity: negativity(&rho, 0)?,
        bound_entanglement_case: b > 0.0 && b < 1.0,
    })
}

/// Bisection for `inequality_value(b) = 1` on `(0.1, 0.5)`.
pub fn detection_threshold() -> Result<f64> {
    let f = |b: f64| -> Result<f64> { Ok(detect(b)?.inequality_value - 1.0) };
    let (mut lo, mut hi) = (0.1, 0.5);
    let flo = f(lo)?;
    if flo.signum() == f(hi)?.signum() {
        return Err(Error::Solver("inequality value does not cross 1 on (0.1, 0.5)".into()));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid)?.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Reports on `start, start + step, …` up to `stop` inclusive.
pub fn sweep(start: f64, stop: f64, step: f64) -> Result<Vec<BoundEntReport>> {
    if step <= 0.0 || stop < start {
        return Err(Error::arg("boundent", "sweep needs step > 0 and stop ≥ start"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| detect(start + k as f64 * step)).collect()
}
