//! Three-qubit pure-state classification into the six SLOCC classes, by the four-observable
//! decision table (generic states) or by the `G_l` concurrences (any pure state).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::measures::{concurrence_sq, g_pauli, three_tangle};
use crate::pauli::{Pauli, PauliProductObservable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlOccClass {
    #[serde(rename = "GHZ")]
    Ghz,
    W,
    #[serde(rename = "BS1")]
    Bs1,
    #[serde(rename = "BS2")]
    Bs2,
    #[serde(rename = "BS3")]
    Bs3,
    Separable,
}

impl SlOccClass {
    /// Biseparable class with qubit `l` (0-based) factored out.
    pub fn biseparable(l: usize) -> Option<Self> {
        [Self::Bs1, Self::Bs2, Self::Bs3].get(l).copied()
    }
}

impl fmt::Display for SlOccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ghz => "GHZ",
            Self::W => "W",
            Self::Bs1 => "BS1",
            Self::Bs2 => "BS2",
            Self::Bs3 => "BS3",
            Self::Separable => "Sep",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub class: SlOccClass,
    pub evidence: BTreeMap<String, f64>,
    pub tol: f64,
}

fn three_qubit(psi: &PureState) -> Result<()> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::arg(
            "classify3q",
            format!("three-qubit pure state required, got dims {:?}", psi.dims()),
        ));
    }
    Ok(())
}

fn pauli_expect(psi: &PureState, word: &str) -> Result<f64> {
    let obs: PauliProductObservable = word.parse()?;
    psi.expect(&obs.matrix())
}

/// `⟨XXX⟩, ⟨XXZ⟩, ⟨XZX⟩, ⟨ZXX⟩` decide the class; a lone nonzero `⟨ZXX⟩` means qubit 1
/// factors out, `⟨XZX⟩` qubit 2, `⟨XXZ⟩` qubit 3.
pub fn classify_decision_table(psi: &PureState, tol: f64) -> Result<ClassificationVerdict> {
    three_qubit(psi)?;
    let names = ["XXX", "XXZ", "XZX", "ZXX"];
    let vals: Vec<f64> = names.iter().map(|w| pauli_expect(psi, w)).collect::<Result<_>>()?;
    let nz = |v: f64| v.abs() > tol;
    let class = if nz(vals[0]) {
        SlOccClass::Ghz
    } else if vals[1..].iter().all(|&v| nz(v)) {
        SlOccClass::W
    } else {
        match (nz(vals[1]), nz(vals[2]), nz(vals[3])) {
            (false, false, true) => SlOccClass::Bs1,
            (false, true, false) => SlOccClass::Bs2,
            (true, false, false) => SlOccClass::Bs3,
            _ => SlOccClass::Separable,
        }
    };
    Ok(ClassificationVerdict {
        class,
        evidence: names.iter().map(|n| n.to_string()).zip(vals).collect(),
        tol,
    })
}

/// Classifier for arbitrary pure states: the zero pattern of `G_l = det ρ_l` fixes
/// separability, and the three-tangle splits the genuine states.
///
/// `G_l` and `τ` are quadratic in the amplitudes while the decision-table correlators are
/// linear, so `tol` is applied to `√G_l` and `√τ`. For generic-form states `√τ = |⟨XXX⟩|` and
/// the two classifiers then threshold the same quantity.
pub fn classify_general(psi: &PureState, tol: f64) -> Result<ClassificationVerdict> {
    three_qubit(psi)?;
    let g: Vec<f64> = (1..=3).map(|l| concurrence_sq(psi, l)).collect::<Result<_>>()?;
    let tau = three_tangle(psi)?;
    let xxx = pauli_expect(psi, "XXX")?;
    let vanishes = |x: f64| x.max(0.0).sqrt() <= tol;
    let zeros: Vec<usize> = (0..3).filter(|&l| vanishes(g[l])).collect();
    let class = match zeros.as_slice() {
        [_, _, _] => SlOccClass::Separable,
        [l] => SlOccClass::biseparable(*l).expect("l < 3"),
        [] if !vanishes(tau) => SlOccClass::Ghz,
        [] => SlOccClass::W,
        // Two vanishing marginal determinants force the third to vanish for pure states.
        _ => SlOccClass::Separable,
    };
    let mut evidence: BTreeMap<String, f64> =
        g.iter().enumerate().map(|(l, v)| (format!("G{}", l + 1), *v)).collect();
    evidence.insert("XXX".into(), xxx);
    evidence.insert("tau".into(), tau);
    Ok(ClassificationVerdict { class, evidence, tol })
}

/// `G_l` from Pauli expectations of a (possibly mixed) state, for experimental input.
pub fn g_values(rho: &DensityMatrix) -> Result<[f64; 3]> {
    Ok([g_pauli(rho, 1)?, g_pauli(rho, 2)?, g_pauli(rho, 3)?])
}

/// Relative error in `⟨obs⟩` from mixedness: `(1 − λ₁) − Σ_{j≥2} λ_j o_j / o₁` with
/// `o_j = ⟨λ_j|obs|λ_j⟩` over the eigenpairs of ρ, `λ₁` the largest.
pub fn mixedness_error(rho: &DensityMatrix, obs: &PauliProductObservable) -> Result<f64> {
    if obs.dims() != rho.dims() {
        return Err(Error::Dimension(format!(
            "observable dims {:?} against state dims {:?}",
            obs.dims(),
            rho.dims()
        )));
    }
    let m = obs.matrix();
    let eig = rho.eig()?;
    let n = eig.values.len();
    let o = |k: usize| -> Result<f64> {
        let v = eig.vector(k);
        Ok(crate::tensor::inner(&v, &m.apply(&v)?).re)
    };
    let top = n - 1;
    let o1 = o(top)?;
    if o1.abs() < 1e-9 {
        return Err(Error::arg(
            "classify3q",
            "observable vanishes on the dominant eigenvector; fractional error undefined",
        ));
    }
    let mut tail = 0.0;
    for k in 0..top {
        tail += eig.values[k] * o(k)?;
    }
    Ok((1.0 - eig.values[top]) - tail / o1)
}

/// Theory column of the decision table: `(⟨XXX⟩, ⟨XXZ⟩, ⟨XZX⟩, ⟨ZXX⟩)`.
pub fn decision_observables(psi: &PureState) -> Result<[f64; 4]> {
    three_qubit(psi)?;
    let w = [Pauli::X, Pauli::Z];
    let word = |a: usize, b: usize, c: usize| PauliProductObservable::paulis(&[w[a], w[b], w[c]]);
    Ok([
        psi.expect(&word(0, 0, 0).matrix())?,
        psi.expect(&word(0, 0, 1).matrix())?,
        psi.expect(&word(0, 1, 0).matrix())?,
        psi.expect(&word(1, 0, 0).matrix())?,
    ])
}
