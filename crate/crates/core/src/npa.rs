//! Level-2 moment matrices for two dichotomic settings per party (2 or 3 parties), with
//! local generators forced to commute, and the locality feasibility test built on them.
//!
//! With commuting generators and `M² = I`, a monomial is fixed by which generators occur an
//! odd number of times, so words are parity bitmasks: bit `2p + x` is setting `x` of party `p`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::sdp::{self, LmiBlock, LmiProblem, SdpOptions, Verdict};
use crate::tensor::{self, ComplexMatrix, C64};

const PARTY_LABELS: [char; 3] = ['A', 'B', 'C'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(u8);

impl Word {
    pub const IDENTITY: Word = Word(0);

    pub fn generator(party: usize, setting: usize) -> Self {
        debug_assert!(party < 3 && setting < 2);
        Word(1 << (2 * party + setting))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Product of two canonical words; every generator is self-inverse and they all commute.
    pub fn mul(self, other: Word) -> Word {
        Word(self.0 ^ other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// Setting of `party` if exactly one of its generators survives.
    pub fn setting(self, party: usize) -> Option<usize> {
        match (self.0 >> (2 * party)) & 0b11 {
            0b01 => Some(0),
            0b10 => Some(1),
            _ => None,
        }
    }

    fn party_bits(self, party: usize) -> u8 {
        (self.0 >> (2 * party)) & 0b11
    }

    /// At most one generator per party: the moment is a measurable correlator.
    pub fn is_observable(self) -> bool {
        (0..3).all(|p| self.party_bits(p) != 0b11)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        for p in 0..3 {
            for x in 0..2 {
                if self.0 & (1 << (2 * p + x)) != 0 {
                    write!(f, "{}{}", PARTY_LABELS[p], x)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    Observable,
    Variable,
}

/// Reduces a raw operator product such as `A1A0A1` to its canonical word.
pub fn canonicalize(raw: &str) -> Result<(Word, MomentKind)> {
    let mut w = Word::IDENTITY;
    let mut chars = raw.trim().chars().peekable();
    if raw.trim() == "I" {
        return Ok((w, MomentKind::Observable));
    }
    while let Some(c) = chars.next() {
        let party = PARTY_LABELS
            .iter()
            .position(|&l| l == c.to_ascii_uppercase())
            .ok_or_else(|| Error::arg("npa", format!("unknown party '{c}' in {raw}")))?;
        let x = chars
            .next()
            .and_then(|d| d.to_digit(10))
            .filter(|&d| d < 2)
            .ok_or_else(|| Error::arg("npa", format!("setting 0 or 1 expected after '{c}' in {raw}")))?;
        w = w.mul(Word::generator(party, x as usize));
    }
    let kind = if w.is_observable() {
        MomentKind::Observable
    } else {
        MomentKind::Variable
    };
    Ok((w, kind))
}

fn check_parties(n: usize) -> Result<()> {
    if !(2..=3).contains(&n) {
        return Err(Error::arg("npa", format!("{n} parties unsupported (2 or 3)")));
    }
    Ok(())
}

/// Identity, the `2n` generators, then all products of two distinct generators.
pub fn level2_words(n_parties: usize) -> Result<Vec<Word>> {
    check_parties(n_parties)?;
    let g = 2 * n_parties;
    let mut out = vec![Word::IDENTITY];
    out.extend((0..g).map(|k| Word(1 << k)));
    for i in 0..g {
        for j in (i + 1)..g {
            out.push(Word((1 << i) | (1 << j)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentAudit {
    pub n_parties: usize,
    pub size: usize,
    /// Distinct observable keys in Γ other than the identity.
    pub observable_keys: usize,
    /// Distinct non-observable keys in Γ: the free variables of the SDP.
    pub free_in_gamma: usize,
    /// All canonical monomials that are not observable, whether or not Γ reaches them.
    pub non_observable_monomials: usize,
}

#[derive(Clone, Debug)]
pub struct MomentMatrix {
    pub n_parties: usize,
    pub words: Vec<Word>,
    /// `keys[i][j]` is the canonical word of `w_i† w_j`.
    pub keys: Vec<Vec<Word>>,
    pub observable: Vec<Word>,
    pub free: Vec<Word>,
}

impl MomentMatrix {
    pub fn level2(n_parties: usize) -> Result<Self> {
        let words = level2_words(n_parties)?;
        let keys: Vec<Vec<Word>> = words
            .iter()
            .map(|a| words.iter().map(|b| a.mul(*b)).collect())
            .collect();
        let mut observable = Vec::new();
        let mut free = Vec::new();
        for row in &keys {
            for &k in row {
                let list = if k.is_observable() { &mut observable } else { &mut free };
                if !k.is_identity() && !list.contains(&k) {
                    list.push(k);
                }
            }
        }
        observable.sort();
        free.sort();
        Ok(Self {
            n_parties,
            words,
            keys,
            observable,
            free,
        })
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn audit(&self) -> MomentAudit {
        let all = 1usize << (2 * self.n_parties);
        let obs_all = 3usize.pow(self.n_parties as u32);
        MomentAudit {
            n_parties: self.n_parties,
            size: self.size(),
            observable_keys: self.observable.len(),
            free_in_gamma: self.free.len(),
            non_observable_monomials: all - obs_all,
        }
    }

    /// Γ with observable entries from `moments` and free entries from `values` (ordered as `free`).
    pub fn fill(&self, moments: &BTreeMap<Word, f64>, values: &[f64]) -> Result<ComplexMatrix> {
        if values.len() != self.free.len() {
            return Err(Error::arg("npa", "wrong number of free values"));
        }
        let n = self.size();
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let k = self.keys[i][j];
                let v = if k.is_identity() {
                    1.0
                } else if let Some(pos) = self.free.iter().position(|f| *f == k) {
                    values[pos]
                } else {
                    *moments
                        .get(&k)
                        .ok_or_else(|| Error::arg("npa", format!("moment {k} missing")))?
                };
                g.set(i, j, C64::new(v, 0.0));
            }
        }
        Ok(g)
    }

    fn lmi(&self, moments: &BTreeMap<Word, f64>) -> Result<LmiProblem> {
        let f0 = self.fill(moments, &vec![0.0; self.free.len()])?;
        let n = self.size();
        let fk = self
            .free
            .iter()
            .map(|&f| {
                ComplexMatrix::from_fn(n, n, |i, j| {
                    C64::new(if self.keys[i][j] == f { 1.0 } else { 0.0 }, 0.0)
                })
            })
            .collect();
        LmiProblem::new(vec![0.0; self.free.len()], vec![LmiBlock { f0, fk }])
    }
}

/// A dichotomic observable pair `(M₀, M₁)` for one party.
pub type Settings = [ComplexMatrix; 2];

fn check_dichotomic(m: &ComplexMatrix) -> Result<()> {
    let sq = m.matmul(m)?;
    let err = sq.max_abs_diff(&ComplexMatrix::identity(m.rows()));
    if !m.is_hermitian(1e-10) || err > 1e-9 {
        return Err(Error::arg("npa", "settings must be Hermitian with M² = I"));
    }
    Ok(())
}

/// Every observable correlator `⟨⊗_p M_{x_p}⟩` over the level-2 keys (all 1-, 2- and 3-body terms).
pub fn measured_moments(rho: &DensityMatrix, settings: &[Settings]) -> Result<BTreeMap<Word, f64>> {
    let n = settings.len();
    check_parties(n)?;
    for s in settings {
        check_dichotomic(&s[0])?;
        check_dichotomic(&s[1])?;
    }
    let dims: Vec<usize> = settings.iter().map(|s| s[0].rows()).collect();
    if rho.dims() != dims.as_slice() || settings.iter().any(|s| s[1].rows() != s[0].rows()) {
        return Err(Error::Dimension(format!(
            "settings act on {dims:?}, state has dims {:?}",
            rho.dims()
        )));
    }
    let mm = MomentMatrix::level2(n)?;
    let mut out = BTreeMap::new();
    for &k in &mm.observable {
        let factors: Vec<ComplexMatrix> = (0..n)
            .map(|p| match k.setting(p) {
                Some(x) => settings[p][x].clone(),
                None => ComplexMatrix::identity(dims[p]),
            })
            .collect();
        out.insert(k, rho.expect(&tensor::kron_all(&factors))?);
    }
    Ok(out)
}

/// Moments of a deterministic local strategy: party `p` answers `outcomes[p][x] ∈ {±1}`.
pub fn deterministic_moments(outcomes: &[[i8; 2]]) -> Result<BTreeMap<Word, f64>> {
    let n = outcomes.len();
    check_parties(n)?;
    if outcomes.iter().flatten().any(|&o| o != 1 && o != -1) {
        return Err(Error::arg("npa", "deterministic outcomes must be ±1"));
    }
    let mm = MomentMatrix::level2(n)?;
    Ok(mm
        .observable
        .iter()
        .map(|&k| {
            let v: f64 = (0..n)
                .filter_map(|p| k.setting(p).map(|x| f64::from(outcomes[p][x])))
                .product();
            (k, v)
        })
        .collect())
}

/// Convex mixture of moment tables.
pub fn mix_moments(parts: &[(f64, BTreeMap<Word, f64>)]) -> BTreeMap<Word, f64> {
    let mut out = BTreeMap::new();
    for (w, m) in parts {
        for (k, v) in m {
            *out.entry(*k).or_insert(0.0) += w * v;
        }
    }
    out
}

/// `⟨A0B0⟩ + ⟨A0B1⟩ + ⟨A1B0⟩ − ⟨A1B1⟩` from a two-party table.
pub fn chsh_value(moments: &BTreeMap<Word, f64>) -> Result<f64> {
    let get = |s: &str| -> Result<f64> {
        let (k, _) = canonicalize(s)?;
        moments
            .get(&k)
            .copied()
            .ok_or_else(|| Error::arg("npa", format!("moment {s} missing")))
    };
    Ok(get("A0B0")? + get("A0B1")? + get("A1B0")? - get("A1B1")?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalityReport {
    pub n_parties: usize,
    pub local_feasible: bool,
    pub verdict: Verdict,
    /// `min t` with `Γ + tI ⪰ 0`; `t* ≤ 1e−6` is feasible, `t* > 1e−4` infeasible.
    pub t_star: f64,
    pub free_variables: usize,
    pub known: BTreeMap<String, f64>,
    pub free_values: BTreeMap<String, f64>,
    pub iterations: usize,
}

/// Searches for free moments making Γ PSD; failure certifies that no commuting (local) model
/// reproduces the observed correlators.
pub fn test_locality(moments: &BTreeMap<Word, f64>, n_parties: usize) -> Result<LocalityReport> {
    test_locality_with(moments, n_parties, &SdpOptions::default())
}

pub fn test_locality_with(
    moments: &BTreeMap<Word, f64>,
    n_parties: usize,
    opts: &SdpOptions,
) -> Result<LocalityReport> {
    let mm = MomentMatrix::level2(n_parties)?;
    if let Some(k) = mm.observable.iter().find(|k| !moments.contains_key(k)) {
        return Err(Error::arg("npa", format!("moment {k} missing")));
    }
    let res = sdp::feasibility(&mm.lmi(moments)?, opts)?;
    Ok(LocalityReport {
        n_parties,
        local_feasible: res.feasible(),
        verdict: res.verdict,
        t_star: res.t_star,
        free_variables: mm.free.len(),
        known: mm.observable.iter().map(|k| (k.to_string(), moments[k])).collect(),
        free_values: mm.free.iter().zip(&res.x).map(|(k, v)| (k.to_string(), *v)).collect(),
        iterations: res.iterations,
    })
}

/// `Γ_ij = Tr(O_i† O_j ρ)` with the actual (non-commuting) operator products; PSD for any state.
pub fn quantum_gamma(rho: &DensityMatrix, settings: &[Settings]) -> Result<ComplexMatrix> {
    let n = settings.len();
    check_parties(n)?;
    let dims: Vec<usize> = settings.iter().map(|s| s[0].rows()).collect();
    if rho.dims() != dims.as_slice() {
        return Err(Error::Dimension("settings do not match the state".into()));
    }
    let gen = |p: usize, x: usize| {
        let f: Vec<ComplexMatrix> = (0..n)
            .map(|q| if q == p { settings[p][x].clone() } else { ComplexMatrix::identity(dims[q]) })
            .collect();
        tensor::kron_all(&f)
    };
    // Operator of each word in generator order (lowest bit first).
    let ops: Vec<ComplexMatrix> = level2_words(n)?
        .iter()
        .map(|w| {
            let mut op = ComplexMatrix::identity(rho.dim());
            for b in 0..(2 * n) {
                if w.bits() & (1 << b) != 0 {
                    op = op.matmul(&gen(b / 2, b % 2)).expect("square");
                }
            }
            op
        })
        .collect();
    let k = ops.len();
    let mut g = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        let left = ops[i].dagger();
        for j in 0..k {
            g.set(i, j, left.matmul(&ops[j])?.trace_product(rho.matrix())?);
        }
    }
    Ok(g)
}

/// The two-party Γ as printed, upper triangle by rows; `v` labels refer to [`PRINTED_VARIABLES`].
pub const PRINTED_GAMMA_2: [&[&str]; 11] = [
    &["I", "A0", "A1", "B0", "B1", "v1", "A0B0", "A0B1", "A1B0", "A1B1", "v2"],
    &["I", "v1", "A0B0", "A0B1", "A1", "B0", "B1", "v3", "v4", "v5"],
    &["I", "A1B0", "A1B1", "v6", "v3", "v4", "B0", "B1", "v7"],
    &["I", "v2", "v3", "A0", "v5", "A1", "v7", "B1"],
    &["I", "v4", "v5", "A0", "v7", "A1", "v8"],
    &["I", "A1B0", "A1B1", "v9", "v10", "v11"],
    &["I", "v2", "v1", "v12", "A0B1"],
    &["I", "v13", "v1", "v14"],
    &["I", "v2", "A1B1"],
    &["I", "v15"],
    &["I"],
];

/// Operator products defining `v1 … v15` as printed.
pub const PRINTED_VARIABLES: [&str; 15] = [
    "A0A1", "B0B1", "A0A1B0", "A0A1B1", "A0B0B1", "A1A0A1", "A1B0B1", "B1B0B1", "A1A0A1B0",
    "A1A0A1B1", "A1A0B0B1", "A0A1B0B1", "A0A1B1B0", "A0B1B0B1", "A1B1B0B1",
];

/// Canonical word of a printed cell label.
pub fn printed_cell(label: &str) -> Result<Word> {
    if let Some(idx) = label.strip_prefix('v') {
        let k: usize = idx
            .parse()
            .map_err(|_| Error::arg("npa", format!("bad label {label}")))?;
        let raw = PRINTED_VARIABLES
            .get(k.wrapping_sub(1))
            .ok_or_else(|| Error::arg("npa", format!("no variable {label}")))?;
        return Ok(canonicalize(raw)?.0);
    }
    Ok(canonicalize(label)?.0)
}

/// Cells of the printed two-party Γ whose label disagrees with canonicalization.
pub fn printed_gamma_mismatches() -> Result<Vec<(usize, usize, String, Word)>> {
    let mm = MomentMatrix::level2(2)?;
    let mut out = Vec::new();
    for (i, row) in PRINTED_GAMMA_2.iter().enumerate() {
        for (off, label) in row.iter().enumerate() {
            let j = i + off;
            let ours = mm.keys[i][j];
            if printed_cell(label)? != ours {
                out.push((i, j, label.to_string(), ours));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_labels_round_trip() {
        for w in level2_words(3).unwrap() {
            assert_eq!(canonicalize(&w.to_string()).unwrap().0, w);
        }
    }

    #[test]
    fn squares_cancel() {
        assert_eq!(canonicalize("A0A0").unwrap().0, Word::IDENTITY);
        assert_eq!(canonicalize("A1A0A1").unwrap(), (Word::generator(0, 0), MomentKind::Observable));
        assert_eq!(canonicalize("A0A1").unwrap().1, MomentKind::Variable);
    }
}
