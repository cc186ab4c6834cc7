//! Pauli and Gell-Mann operator bases and tensor-word observables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{kron_all, ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Result<Self> {
        Self::ALL
            .get(k)
            .copied()
            .ok_or_else(|| Error::arg("pauli", format!("index {k} out of range")))
    }

    pub fn matrix(self) -> ComplexMatrix {
        let d = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::new(2, 2, d.to_vec()).expect("2x2")
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Product `a·b = phase · c`.
    pub fn mul(a: Pauli, b: Pauli) -> (C64, Pauli) {
        use Pauli::*;
        match (a, b) {
            (I, p) | (p, I) => (ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (ONE, I),
            (X, Y) => (crate::tensor::I, Z),
            (Y, X) => (-crate::tensor::I, Z),
            (Y, Z) => (crate::tensor::I, X),
            (Z, Y) => (-crate::tensor::I, X),
            (Z, X) => (crate::tensor::I, Y),
            (X, Z) => (-crate::tensor::I, Y),
        }
    }
}

pub fn sigma_x() -> ComplexMatrix {
    Pauli::X.matrix()
}

pub fn sigma_y() -> ComplexMatrix {
    Pauli::Y.matrix()
}

pub fn sigma_z() -> ComplexMatrix {
    Pauli::Z.matrix()
}

/// Gell-Mann matrix `λ_k` for `k ∈ 1..=8`, with `λ_0 = I₃`. `Tr(λ_i λ_j) = 2δ_ij`.
pub fn gell_mann(k: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(3, 3);
    let r = |x: f64| C64::new(x, 0.0);
    match k {
        0 => return Ok(ComplexMatrix::identity(3)),
        1 => {
            m.set(0, 1, ONE);
            m.set(1, 0, ONE);
        }
        2 => {
            m.set(0, 1, -I);
            m.set(1, 0, I);
        }
        3 => {
            m.set(0, 0, ONE);
            m.set(1, 1, -ONE);
        }
        4 => {
            m.set(0, 2, ONE);
            m.set(2, 0, ONE);
        }
        5 => {
            m.set(0, 2, -I);
            m.set(2, 0, I);
        }
        6 => {
            m.set(1, 2, ONE);
            m.set(2, 1, ONE);
        }
        7 => {
            m.set(1, 2, -I);
            m.set(2, 1, I);
        }
        8 => {
            let s = 1.0 / 3f64.sqrt();
            m.set(0, 0, r(s));
            m.set(1, 1, r(s));
            m.set(2, 2, r(-2.0 * s));
        }
        _ => return Err(Error::arg("pauli", format!("Gell-Mann index {k} out of range"))),
    }
    Ok(m)
}

/// One tensor factor of an observable word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LocalOp {
    Pauli(Pauli),
    /// Gell-Mann index 0..=8 on a qutrit; 0 is the identity.
    GellMann(u8),
    /// Arbitrary Hermitian single-subsystem operator, e.g. a rotated σz.
    Matrix(ComplexMatrix),
}

impl LocalOp {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            LocalOp::Pauli(p) => p.matrix(),
            LocalOp::GellMann(k) => gell_mann(*k as usize).expect("index validated at construction"),
            LocalOp::Matrix(m) => m.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            LocalOp::Pauli(_) => 2,
            LocalOp::GellMann(_) => 3,
            LocalOp::Matrix(m) => m.rows(),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, LocalOp::Pauli(Pauli::I) | LocalOp::GellMann(0))
    }

    fn label(&self) -> String {
        match self {
            LocalOp::Pauli(p) => p.symbol().to_string(),
            LocalOp::GellMann(0) => "1".into(),
            LocalOp::GellMann(k) => format!("L{k}"),
            LocalOp::Matrix(_) => "M".into(),
        }
    }
}

/// A tensor word `prefactor · O₁ ⊗ O₂ ⊗ …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliProductObservable {
    pub factors: Vec<LocalOp>,
    pub prefactor: f64,
}

impl PauliProductObservable {
    pub fn new(factors: Vec<LocalOp>, prefactor: f64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::arg("pauli", "empty observable word"));
        }
        for f in &factors {
            match f {
                LocalOp::GellMann(k) if *k > 8 => {
                    return Err(Error::arg("pauli", format!("Gell-Mann index {k} out of range")))
                }
                LocalOp::Matrix(m) if !m.is_hermitian(1e-10) => {
                    return Err(Error::NotHermitian(m.hermiticity_error()))
                }
                _ => {}
            }
        }
        Ok(Self { factors, prefactor })
    }

    pub fn paulis(word: &[Pauli]) -> Self {
        Self {
            factors: word.iter().map(|&p| LocalOp::Pauli(p)).collect(),
            prefactor: 1.0,
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mats: Vec<ComplexMatrix> = self.factors.iter().map(LocalOp::matrix).collect();
        kron_all(&mats).scale_re(self.prefactor)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(LocalOp::dim).collect()
    }

    /// The bare Pauli word when every factor is a Pauli.
    pub fn pauli_word(&self) -> Option<Vec<Pauli>> {
        self.factors
            .iter()
            .map(|f| match f {
                LocalOp::Pauli(p) => Some(*p),
                _ => None,
            })
            .collect()
    }

    pub fn label(&self) -> String {
        let w: String = self.factors.iter().map(LocalOp::label).collect();
        if self.prefactor == 1.0 {
            w
        } else {
            format!("{}*{}", self.prefactor, w)
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            factors: self.factors.clone(),
            prefactor: self.prefactor * s,
        }
    }
}

impl fmt::Display for PauliProductObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses words such as `XXZ` or `IZ` (case-insensitive).
impl FromStr for PauliProductObservable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::arg("pauli", format!("unknown Pauli symbol '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if word.is_empty() {
            return Err(Error::arg("pauli", "empty observable word"));
        }
        Ok(Self::paulis(&word))
    }
}
