//! Gate library and the observable-to-single-qubit-z mapping registries.
//!
//! Qubits are 0-based in the API and 1-based in gate labels (`X1`, `CNOT23`), matching the
//! printed tables. A sequence `A.B.C` denotes the unitary `A·B·C`, so `C` acts first.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliProductObservable};
use crate::tensor::{kron_all, ComplexMatrix, C64, ONE, ZERO};

/// Unitarity tolerance for every constructed gate.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance for accepting a back-propagated readout as `±P`.
const MAPPING_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub unitary: ComplexMatrix,
    pub arity: usize,
    pub label: String,
}

impl Gate {
    pub fn identity(n: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(1 << n),
            arity: n,
            label: "I".into(),
        }
    }

    /// `self · other`: `other` acts first.
    pub fn then_after(&self, other: &Gate) -> Result<Gate> {
        if self.arity != other.arity {
            return Err(Error::arg("circuits", "gate arities differ"));
        }
        Ok(Gate {
            unitary: self.unitary.matmul(&other.unitary)?,
            arity: self.arity,
            label: format!("{}.{}", self.label, other.label),
        })
    }

    pub fn unitarity_error(&self) -> f64 {
        let n = self.unitary.rows();
        self.unitary
            .matmul(&self.unitary.dagger())
            .expect("square")
            .max_abs_diff(&ComplexMatrix::identity(n))
    }
}

fn check_qubit(q: usize, n: usize) -> Result<()> {
    if n == 0 || q >= n {
        return Err(Error::arg("circuits", format!("qubit {q} out of range for {n} qubits")));
    }
    Ok(())
}

/// Places a single-qubit operator at `qubit` among `n`.
pub fn embed_single(op: &ComplexMatrix, qubit: usize, n: usize) -> Result<ComplexMatrix> {
    check_qubit(qubit, n)?;
    let factors: Vec<ComplexMatrix> = (0..n)
        .map(|k| if k == qubit { op.clone() } else { ComplexMatrix::identity(2) })
        .collect();
    Ok(kron_all(&factors))
}

/// `R_φ(θ) = exp(−iθ(cos φ σx + sin φ σy)/2)`.
pub fn rotation_matrix(phase: f64, angle: f64) -> ComplexMatrix {
    let c = C64::new((angle / 2.0).cos(), 0.0);
    let s = (angle / 2.0).sin();
    let mi = C64::new(0.0, -1.0);
    ComplexMatrix::new(
        2,
        2,
        vec![
            c,
            mi * s * C64::from_polar(1.0, -phase),
            mi * s * C64::from_polar(1.0, phase),
            c,
        ],
    )
    .expect("2x2")
}

pub fn rotation(phase: f64, angle: f64, qubit: usize, n: usize) -> Result<Gate> {
    Ok(Gate {
        unitary: embed_single(&rotation_matrix(phase, angle), qubit, n)?,
        arity: n,
        label: format!("R[{phase:.4},{angle:.4}]{}", qubit + 1),
    })
}

/// `exp(−iθσz/2)`, built directly rather than as a composite pulse.
pub fn rz_matrix(angle: f64) -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            C64::from_polar(1.0, -angle / 2.0),
            ZERO,
            ZERO,
            C64::from_polar(1.0, angle / 2.0),
        ],
    )
    .expect("2x2")
}

pub fn rz(angle: f64, qubit: usize, n: usize) -> Result<Gate> {
    Ok(Gate {
        unitary: embed_single(&rz_matrix(angle), qubit, n)?,
        arity: n,
        label: format!("Rz[{angle:.4}]{}", qubit + 1),
    })
}

pub fn hadamard_matrix() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("2x2")
}

/// Controlled-`u` with the control projector acting on qubit `control`.
fn controlled(u: &ComplexMatrix, control: usize, target: usize, n: usize) -> Result<ComplexMatrix> {
    check_qubit(control, n)?;
    check_qubit(target, n)?;
    if control == target {
        return Err(Error::arg("circuits", format!("control and target are both qubit {control}")));
    }
    let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
    let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
    let branch = |proj: &ComplexMatrix, tgt: &ComplexMatrix| {
        let f: Vec<ComplexMatrix> = (0..n)
            .map(|k| {
                if k == control {
                    proj.clone()
                } else if k == target {
                    tgt.clone()
                } else {
                    ComplexMatrix::identity(2)
                }
            })
            .collect();
        kron_all(&f)
    };
    branch(&p0, &ComplexMatrix::identity(2)).try_add(&branch(&p1, u))
}

pub fn cnot(control: usize, target: usize, n: usize) -> Result<Gate> {
    Ok(Gate {
        unitary: controlled(&Pauli::X.matrix(), control, target, n)?,
        arity: n,
        label: format!("CNOT{}{}", control + 1, target + 1),
    })
}

pub fn controlled_hadamard(control: usize, target: usize, n: usize) -> Result<Gate> {
    Ok(Gate {
        unitary: controlled(&hadamard_matrix(), control, target, n)?,
        arity: n,
        label: format!("CH{}{}", control + 1, target + 1),
    })
}

/// Parses one pulse label: `X2`, `Xb2` (X̄), `Y1`, `Yb3`, `CNOT12`, `CH12` or `I`.
pub fn parse_gate(label: &str, n: usize) -> Result<Gate> {
    let bad = || Error::arg("circuits", format!("unknown gate label '{label}'"));
    let digit = |c: char| c.to_digit(10).map(|d| d as usize).filter(|&d| d >= 1).ok_or_else(bad);
    if label == "I" {
        return Ok(Gate::identity(n));
    }
    for (prefix, two) in [("CNOT", true), ("CH", false)] {
        if let Some(rest) = label.strip_prefix(prefix) {
            let cs: Vec<char> = rest.chars().collect();
            if cs.len() != 2 {
                return Err(bad());
            }
            let (c, t) = (digit(cs[0])? - 1, digit(cs[1])? - 1);
            let mut g = if two { cnot(c, t, n)? } else { controlled_hadamard(c, t, n)? };
            g.label = label.to_string();
            return Ok(g);
        }
    }
    let (phase, rest) = if let Some(r) = label.strip_prefix("Xb") {
        (PI, r)
    } else if let Some(r) = label.strip_prefix("Yb") {
        (-FRAC_PI_2, r)
    } else if let Some(r) = label.strip_prefix('X') {
        (0.0, r)
    } else if let Some(r) = label.strip_prefix('Y') {
        (FRAC_PI_2, r)
    } else {
        return Err(bad());
    };
    let cs: Vec<char> = rest.chars().collect();
    if cs.len() != 1 {
        return Err(bad());
    }
    let q = digit(cs[0])? - 1;
    let mut g = rotation(phase, FRAC_PI_2, q, n)?;
    g.label = label.to_string();
    Ok(g)
}

/// Unitary of a dot-separated sequence; the empty string is the identity.
pub fn sequence_unitary(seq: &str, n: usize) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(1 << n);
    if seq.is_empty() {
        return Ok(u);
    }
    for label in seq.split('.') {
        u = u.matmul(&parse_gate(label, n)?.unitary)?;
    }
    Ok(u)
}

/// One registry row: measuring σz on `readout` after `sequence` yields `sign · ⟨P⟩`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MappingEntry {
    pub id: String,
    pub observable: String,
    pub sequence: String,
    /// 0-based readout qubit.
    pub readout: usize,
    pub sign: f64,
    /// True when the printed row was inconsistent and has been replaced.
    pub corrected: bool,
    pub printed_sequence: String,
    pub printed_readout: usize,
}

impl MappingEntry {
    pub fn word(&self) -> Vec<Pauli> {
        self.observable
            .parse::<PauliProductObservable>()
            .expect("registry words are valid")
            .pauli_word()
            .expect("Pauli word")
    }

    pub fn n_qubits(&self) -> usize {
        self.observable.len()
    }

    pub fn unitary(&self) -> Result<ComplexMatrix> {
        sequence_unitary(&self.sequence, self.n_qubits())
    }

    /// `⟨σz(readout)⟩` in `UρU†`, without the sign.
    pub fn raw_readout(&self, rho: &DensityMatrix) -> Result<f64> {
        let n = self.n_qubits();
        let evolved = rho.evolve(&self.unitary()?)?;
        evolved.expect(&embed_single(&Pauli::Z.matrix(), self.readout, n)?)
    }
}

/// Sign `s` with `U† Z_r U = s·P`, or `None` when the row is not a mapping of `P`.
pub fn mapping_sign(sequence: &str, readout: usize, word: &[Pauli]) -> Result<Option<f64>> {
    let n = word.len();
    let u = sequence_unitary(sequence, n)?;
    let z = embed_single(&Pauli::Z.matrix(), readout, n)?;
    let back = u.dagger().matmul(&z)?.matmul(&u)?;
    let p = PauliProductObservable::paulis(word).matrix();
    for s in [1.0, -1.0] {
        if back.max_abs_diff(&p.scale_re(s)) < MAPPING_TOL {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MappingRegistry {
    pub n_qubits: usize,
    pub entries: Vec<MappingEntry>,
}

/// (id, word, printed sequence, printed readout 1-based, correction).
type Row = (&'static str, &'static str, &'static str, usize, Option<(&'static str, usize)>);

const TWO_QUBIT_ROWS: [Row; 15] = [
    ("O1", "XX", "CNOT12.Y2.Y1", 2, None),
    ("O2", "YY", "CNOT12.Xb2.Xb1", 2, None),
    ("O3", "ZZ", "CNOT12", 2, None),
    ("O4", "XY", "CNOT12.Xb2.Y1", 2, None),
    ("O5", "XZ", "CNOT12.Y1", 2, None),
    ("O6", "YX", "CNOT12.Yb2.X1", 2, None),
    ("O7", "YZ", "CNOT12.X1", 2, None),
    ("O8", "ZX", "CNOT12.Yb2", 2, None),
    ("O9", "ZY", "CNOT12.X2", 2, None),
    ("O10", "XI", "Yb1", 1, None),
    ("O11", "YI", "X1", 1, None),
    ("O12", "ZI", "", 1, None),
    ("O13", "IX", "Yb2", 2, None),
    ("O14", "IY", "X2", 2, None),
    ("O15", "IZ", "", 2, None),
];

/// Three-qubit sequences indexed by `16a + 4b + c` for Paulis `a, b, c` on qubits 1, 2, 3.
const THREE_QUBIT_ROWS: [(&str, usize, Option<(&str, usize)>); 63] = [
    ("Yb3", 3, None),
    ("X3", 3, None),
    ("", 3, None),
    ("Yb2", 2, None),
    ("CNOT23.Yb3.Yb2", 3, None),
    ("CNOT23.X3.Yb2", 3, None),
    ("CNOT23.Yb2", 3, None),
    ("X2", 2, None),
    ("CNOT23.Yb3.X2", 3, None),
    ("CNOT23.X3.X2", 3, None),
    ("CNOT23.X2", 3, None),
    ("", 3, Some(("", 2))),
    ("CNOT23.Yb3", 3, None),
    ("CNOT23.X3", 3, None),
    ("CNOT23", 3, None),
    ("X1", 1, Some(("Yb1", 1))),
    ("CNOT13.Yb3.Yb1", 3, None),
    ("CNOT13.X3.Yb1", 3, None),
    ("CNOT13.Yb1", 3, None),
    ("CNOT12.Yb2.Yb1", 2, None),
    ("CNOT23.Yb3.CNOT12.Yb2.Yb1", 3, None),
    ("CNOT23.X3.CNOT12.Yb2.Yb1", 3, None),
    ("CNOT23.CNOT12.Yb2.Yb1", 3, None),
    ("CNOT12.X2.Yb1", 2, None),
    ("CNOT23.Yb3.CNOT12.X2.Yb1", 3, None),
    ("CNOT23.X3.CNOT12.X2.Yb1", 3, None),
    ("CNOT23.CNOT12.X2.Yb1", 3, None),
    ("CNOT12.Yb1", 2, None),
    ("CNOT23.Yb3.CNOT12.Yb1", 3, None),
    ("CNOT23.X3.CNOT12.Yb1", 3, None),
    ("CNOT12.CNOT23.Yb1", 3, Some(("CNOT23.CNOT12.Yb1", 3))),
    ("X1", 1, None),
    ("CNOT13.Yb3.X1", 3, None),
    ("CNOT13.X3.X1", 3, None),
    ("CNOT13.X1", 3, None),
    ("CNOT12.Yb2.X1", 2, None),
    ("CNOT23.Yb3.CNOT12.Yb2.X1", 3, None),
    ("CNOT23.X3.CNOT12.Yb2.X1", 3, None),
    ("CNOT23.CNOT12.Yb2.X1", 3, None),
    ("CNOT12.X2.X1", 2, None),
    ("CNOT23.Yb3.CNOT12.X2.X1", 3, None),
    ("CNOT23.X3.CNOT12.X2.X1", 3, None),
    ("CNOT23.CNOT12.X2.X1", 3, None),
    ("CNOT12.X1", 2, None),
    ("CNOT23.Yb3.CNOT12.X1", 3, None),
    ("CNOT23.X3.CNOT12.X1", 3, None),
    ("CNOT23.CNOT12.X1", 3, None),
    ("", 1, None),
    ("CNOT13.Yb3", 3, None),
    ("CNOT13.X3", 3, None),
    ("CNOT13", 3, None),
    ("CNOT12.Yb2", 2, None),
    ("CNOT23.Yb3.CNOT12.Yb2", 3, None),
    ("CNOT23.X3.CNOT12.Yb2", 3, None),
    ("CNOT23.CNOT12.Yb2", 3, None),
    ("CNOT12.X2", 2, None),
    ("CNOT23.Yb3.CNOT12.X2", 3, None),
    ("CNOT23.X3.CNOT12.X2", 3, None),
    ("CNOT23.CNOT12.X2", 3, None),
    ("CNOT12", 2, None),
    ("CNOT23.Yb3.CNOT12", 3, None),
    ("CNOT23.X3.CNOT12", 3, None),
    ("CNOT23.CNOT12", 3, None),
];

/// Pauli word for three-qubit table index `16a + 4b + c`.
pub fn three_qubit_word(index: usize) -> Result<Vec<Pauli>> {
    if index == 0 || index > 63 {
        return Err(Error::arg("circuits", format!("table index {index} out of 1..=63")));
    }
    Ok(vec![
        Pauli::from_index(index / 16)?,
        Pauli::from_index((index / 4) % 4)?,
        Pauli::from_index(index % 4)?,
    ])
}

fn word_string(w: &[Pauli]) -> String {
    w.iter().map(|p| p.symbol()).collect()
}

impl MappingRegistry {
    fn build(n: usize, rows: Vec<(String, Vec<Pauli>, &str, usize, Option<(&str, usize)>)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len());
        for (id, word, printed_seq, printed_r, fix) in rows {
            let (seq, r) = fix.unwrap_or((printed_seq, printed_r));
            let sign = mapping_sign(seq, r - 1, &word)?.ok_or_else(|| {
                Error::Solver(format!("mapping row {id} does not back-propagate to {}", word_string(&word)))
            })?;
            entries.push(MappingEntry {
                id,
                observable: word_string(&word),
                sequence: seq.to_string(),
                readout: r - 1,
                sign,
                corrected: fix.is_some(),
                printed_sequence: printed_seq.to_string(),
                printed_readout: printed_r - 1,
            });
        }
        Ok(Self { n_qubits: n, entries })
    }

    /// The fifteen two-qubit rows, validated and signed at build time.
    pub fn two_qubit() -> &'static MappingRegistry {
        static REG: OnceLock<MappingRegistry> = OnceLock::new();
        REG.get_or_init(|| {
            let rows = TWO_QUBIT_ROWS
                .iter()
                .map(|&(id, w, s, r, fix)| {
                    let word = w.parse::<PauliProductObservable>().expect("valid").pauli_word().expect("Pauli");
                    (id.to_string(), word, s, r, fix)
                })
                .collect();
            Self::build(2, rows).expect("two-qubit table is consistent")
        })
    }

    /// The sixty-three three-qubit rows, validated and signed at build time.
    pub fn three_qubit() -> &'static MappingRegistry {
        static REG: OnceLock<MappingRegistry> = OnceLock::new();
        REG.get_or_init(|| {
            let rows = THREE_QUBIT_ROWS
                .iter()
                .enumerate()
                .map(|(k, &(s, r, fix))| {
                    let idx = k + 1;
                    (format!("B{idx}"), three_qubit_word(idx).expect("in range"), s, r, fix)
                })
                .collect();
            Self::build(3, rows).expect("three-qubit table is consistent after corrections")
        })
    }

    pub fn for_qubits(n: usize) -> Result<&'static MappingRegistry> {
        match n {
            2 => Ok(Self::two_qubit()),
            3 => Ok(Self::three_qubit()),
            _ => Err(Error::arg("circuits", format!("no mapping registry for {n} qubits"))),
        }
    }

    pub fn lookup(&self, word: &[Pauli]) -> Option<&MappingEntry> {
        let w = word_string(word);
        self.entries.iter().find(|e| e.observable == w)
    }

    /// Rows whose printed form does not map to their observable even up to sign.
    pub fn printed_failures(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for e in &self.entries {
            if mapping_sign(&e.printed_sequence, e.printed_readout, &e.word())?.is_none() {
                bad.push(e.id.clone());
            }
        }
        Ok(bad)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Loads a dumped registry and re-validates every row's sign.
    pub fn from_json(s: &str) -> Result<Self> {
        let reg: MappingRegistry =
            serde_json::from_str(s).map_err(|e| Error::arg("circuits", e.to_string()))?;
        for e in &reg.entries {
            match mapping_sign(&e.sequence, e.readout, &e.word())? {
                Some(sg) if sg == e.sign => {}
                _ => return Err(Error::arg("circuits", format!("row {} fails validation", e.id))),
            }
        }
        Ok(reg)
    }
}

/// `⟨P⟩` obtained by the mapping route: sign · prefactor · ⟨σz(readout)⟩ in `UρU†`.
pub fn expectation_via_mapping(rho: &DensityMatrix, obs: &PauliProductObservable) -> Result<f64> {
    let word = obs
        .pauli_word()
        .ok_or_else(|| Error::Unregistered(obs.label()))?;
    if rho.dims().iter().any(|&d| d != 2) || rho.dims().len() != word.len() {
        return Err(Error::Dimension(format!(
            "observable {} on dims {:?}",
            obs.label(),
            rho.dims()
        )));
    }
    let reg = MappingRegistry::for_qubits(word.len()).map_err(|_| Error::Unregistered(obs.label()))?;
    let entry = reg.lookup(&word).ok_or_else(|| Error::Unregistered(obs.label()))?;
    Ok(obs.prefactor * entry.sign * entry.raw_readout(rho)?)
}

/// SWAP on two qubits of `n`.
pub fn swap(a: usize, b: usize, n: usize) -> Result<Gate> {
    check_qubit(a, n)?;
    check_qubit(b, n)?;
    let dim = 1 << n;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let ba = (i >> (n - 1 - a)) & 1;
        let bb = (i >> (n - 1 - b)) & 1;
        let mut j = i & !(1 << (n - 1 - a)) & !(1 << (n - 1 - b));
        j |= bb << (n - 1 - a);
        j |= ba << (n - 1 - b);
        u.set(j, i, ONE);
    }
    Ok(Gate {
        unitary: u,
        arity: n,
        label: format!("SWAP{}{}", a + 1, b + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse() {
        assert_eq!(parse_gate("Xb2", 3).unwrap().arity, 3);
        assert!(parse_gate("CNOT11", 2).is_err());
        assert!(parse_gate("Q1", 2).is_err());
        assert!(parse_gate("X4", 3).is_err());
    }

    #[test]
    fn registries_build() {
        assert_eq!(MappingRegistry::two_qubit().entries.len(), 15);
        assert_eq!(MappingRegistry::three_qubit().entries.len(), 63);
    }
}
