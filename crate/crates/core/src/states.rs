//! State catalog: Bell, GHZ, W-type, biseparable, generic three-qubit, qubit–qutrit,
//! Horodecki bound-entangled family, the NCC example, plus noise and sampling helpers.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::tensor::{self, ComplexMatrix, C64, ZERO};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Bell states `k = 1..=4`: φ⁺, φ⁻, ψ⁺, ψ⁻.
pub fn bell(k: usize) -> Result<PureState> {
    let h = FRAC_1_SQRT_2;
    let amp = match k {
        1 => [h, 0.0, 0.0, h],
        2 => [h, 0.0, 0.0, -h],
        3 => [0.0, h, h, 0.0],
        4 => [0.0, h, -h, 0.0],
        _ => return Err(Error::arg("states", format!("Bell index {k} not in 1..=4"))),
    };
    PureState::from_real(vec![2, 2], &amp)
}

fn three_qubit(entries: &[(usize, f64)]) -> PureState {
    let mut amp = vec![0.0; 8];
    for &(i, a) in entries {
        amp[i] = a;
    }
    PureState::from_real(vec![2, 2, 2], &amp).expect("nonzero catalog vector")
}

pub fn ghz() -> PureState {
    three_qubit(&[(0, 1.0), (7, 1.0)])
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w() -> PureState {
    three_qubit(&[(1, 1.0), (2, 1.0), (4, 1.0)])
}

/// Bit flip of W: `(|110⟩ + |101⟩ + |011⟩)/√3`.
pub fn w_bar() -> PureState {
    three_qubit(&[(6, 1.0), (5, 1.0), (3, 1.0)])
}

/// `(|W⟩ + |W̄⟩)/√2`.
pub fn w_wbar() -> PureState {
    three_qubit(&[(1, 1.0), (2, 1.0), (4, 1.0), (3, 1.0), (5, 1.0), (6, 1.0)])
}

/// Biseparable `k|rest`: qubit `k` (1-based) in `|0⟩`, φ⁺ on the other two.
pub fn bs(k: usize) -> Result<PureState> {
    let pairs = match k {
        1 => [0b000, 0b011],
        2 => [0b000, 0b101],
        3 => [0b000, 0b110],
        _ => return Err(Error::arg("states", format!("biseparable index {k} not in 1..=3"))),
    };
    Ok(three_qubit(&[(pairs[0], 1.0), (pairs[1], 1.0)]))
}

/// `|000⟩`.
pub fn sep() -> PureState {
    three_qubit(&[(0, 1.0)])
}

/// Parameters of the canonical generic three-qubit form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericParams {
    pub a: [f64; 5],
    pub theta: f64,
}

impl GenericParams {
    pub fn new(a: [f64; 5], theta: f64) -> Result<Self> {
        if a.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::arg("states", "generic amplitudes must be nonnegative"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::arg("states", format!("theta {theta} outside [0, π]")));
        }
        let norm: f64 = a.iter().map(|x| x * x).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("Σa² = {norm}, expected 1")));
        }
        Ok(Self { a, theta })
    }

    /// Draws nonnegative amplitudes uniformly on the unit sphere's positive orthant and θ uniform.
    pub fn random(rng: &mut ChaCha20Rng) -> Self {
        loop {
            let a: [f64; 5] = std::array::from_fn(|_| {
                let g: f64 = StandardNormal.sample(rng);
                g.abs()
            });
            let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-6 {
                let theta = rand::Rng::random::<f64>(rng) * std::f64::consts::PI;
                return Self {
                    a: a.map(|x| x / n),
                    theta,
                };
            }
        }
    }
}

/// `a0|000⟩ + a1 e^{iθ}|100⟩ + a2|101⟩ + a3|110⟩ + a4|111⟩`.
pub fn generic(p: &GenericParams) -> Result<PureState> {
    let mut amp = vec![ZERO; 8];
    amp[0b000] = c(p.a[0]);
    amp[0b100] = C64::from_polar(p.a[1], p.theta);
    amp[0b101] = c(p.a[2]);
    amp[0b110] = c(p.a[3]);
    amp[0b111] = c(p.a[4]);
    PureState::new(vec![2, 2, 2], amp)
}

/// `cos(θ/2)|00⟩ + sin(θ/2)|11⟩`.
pub fn e_theta(theta: f64) -> Result<PureState> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::arg("states", format!("theta {theta} outside [0, π]")));
    }
    PureState::from_real(vec![2, 2], &[(theta / 2.0).cos(), 0.0, 0.0, (theta / 2.0).sin()])
}

/// Two-parameter qubit–qutrit family; `β = (1 − 2α − γ)/3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoParamQubitQutrit {
    pub alpha: f64,
    pub gamma: f64,
}

impl TwoParamQubitQutrit {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        let p = Self { alpha, gamma };
        if !(0.0..=0.5).contains(&alpha) || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::arg("states", format!("(α, γ) = ({alpha}, {gamma}) out of range")));
        }
        if p.beta() < -1e-12 {
            return Err(Error::InvalidState(format!("β = {} is negative", p.beta())));
        }
        Ok(p)
    }

    pub fn beta(&self) -> f64 {
        (1.0 - 2.0 * self.alpha - self.gamma) / 3.0
    }

    /// NPT (hence entangled) iff `2α + 2γ > 1`.
    pub fn is_entangled(&self) -> bool {
        2.0 * self.alpha + 2.0 * self.gamma > 1.0
    }
}

/// Basis index of qubit `q`, qutrit `t`.
fn qq(q: usize, t: usize) -> usize {
    3 * q + t
}

/// Qubit–qutrit Bell-type vectors embedded in the qutrit's `{|0⟩, |1⟩}` subspace.
fn qq_bell(plus: bool, phi: bool) -> Vec<C64> {
    let h = FRAC_1_SQRT_2;
    let s = if plus { h } else { -h };
    let mut v = vec![ZERO; 6];
    if phi {
        v[qq(0, 0)] = c(h);
        v[qq(1, 1)] = c(s);
    } else {
        v[qq(0, 1)] = c(h);
        v[qq(1, 0)] = c(s);
    }
    v
}

pub fn qubit_qutrit(p: &TwoParamQubitQutrit) -> Result<DensityMatrix> {
    let p = TwoParamQubitQutrit::new(p.alpha, p.gamma)?;
    let beta = p.beta().max(0.0);
    let mut m = ComplexMatrix::zeros(6, 6);
    m.add_at(qq(0, 2), qq(0, 2), c(p.alpha));
    m.add_at(qq(1, 2), qq(1, 2), c(p.alpha));
    let proj = |v: &[C64]| ComplexMatrix::outer(v, v);
    for (plus, phi) in [(true, true), (false, true), (true, false)] {
        m = m.try_add(&proj(&qq_bell(plus, phi)).scale_re(beta))?;
    }
    m = m.try_add(&proj(&qq_bell(false, false)).scale_re(p.gamma))?;
    DensityMatrix::new(vec![2, 3], m)
}

/// Horodecki's 2⊗4 family, written on three qubits (the last two form the ququart).
pub fn horodecki_b(b: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::arg("states", format!("b = {b} outside [0, 1]")));
    }
    let n = 1.0 / (1.0 + 7.0 * b);
    let mut m = ComplexMatrix::zeros(8, 8);
    for i in [0, 1, 2, 3, 5, 6] {
        m.set(i, i, c(b * n));
    }
    m.set(4, 4, c((1.0 + b) / 2.0 * n));
    m.set(7, 7, c((1.0 + b) / 2.0 * n));
    for (i, j) in [(0, 5), (1, 6), (2, 7)] {
        m.set(i, j, c(b * n));
        m.set(j, i, c(b * n));
    }
    let off = (1.0 - b * b).max(0.0).sqrt() / 2.0 * n;
    m.set(4, 7, c(off));
    m.set(7, 4, c(off));
    DensityMatrix::new(vec![2, 2, 2], m)
}

/// The same family assembled as the five-component convex mixture.
pub fn horodecki_b_mixture(b: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::arg("states", format!("b = {b} outside [0, 1]")));
    }
    let psi = |i: usize, j: usize| three_qubit(&[(i, 1.0), (j, 1.0)]).to_density();
    let phi_b = three_qubit(&[(0b100, (1.0 + b).sqrt()), (0b111, (1.0 - b).sqrt())]).to_density();
    let w = 7.0 * b / (7.0 * b + 1.0);
    let (p1, p2, p3) = (psi(0b000, 0b101), psi(0b001, 0b110), psi(0b010, 0b111));
    let s011 = three_qubit(&[(0b011, 1.0)]).to_density();
    DensityMatrix::mixture(&[
        (w * 2.0 / 7.0, &p1),
        (w * 2.0 / 7.0, &p2),
        (w * 2.0 / 7.0, &p3),
        (w / 7.0, &s011),
        (1.0 - w, &phi_b),
    ])
}

/// `½(|00⟩⟨00| + |1+⟩⟨1+|)`: separable, no product eigenbasis.
pub fn ncc_sigma() -> DensityMatrix {
    let h = FRAC_1_SQRT_2;
    let s00 = PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 0.0]).expect("unit");
    let s1p = PureState::from_real(vec![2, 2], &[0.0, 0.0, h, h]).expect("unit");
    DensityMatrix::mixture(&[(0.5, &s00.to_density()), (0.5, &s1p.to_density())]).expect("valid")
}

/// `(1 − ε) I/d + ε|ψ⟩⟨ψ|`.
pub fn pseudo_pure(psi: &PureState, eps: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::arg("states", format!("ε = {eps} outside [0, 1]")));
    }
    let mixed = DensityMatrix::maximally_mixed(psi.dims().to_vec());
    DensityMatrix::mixture(&[(1.0 - eps, &mixed), (eps, &psi.to_density())])
}

/// Haar-random pure state on arbitrary dims from a caller-owned generator.
pub fn haar_random_state(dims: &[usize], rng: &mut ChaCha20Rng) -> Result<PureState> {
    let d: usize = dims.iter().product();
    let amp: Vec<C64> = (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    PureState::normalized(dims.to_vec(), amp)
}

/// Haar-random `n`-qubit pure state; bit-identical for a given seed.
pub fn haar_random_pure(n: usize, seed: u64) -> Result<PureState> {
    if n == 0 {
        return Err(Error::arg("states", "need at least one qubit"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    haar_random_state(&vec![2; n], &mut rng)
}

/// Haar-random `d × d` unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary(d: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        for u in &cols {
            let p = tensor::inner(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= p * ui;
            }
        }
        let n = tensor::vec_norm(&v);
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Random separable mixture of `terms` Haar-random product states.
pub fn random_separable(dims: &[usize], terms: usize, rng: &mut ChaCha20Rng) -> Result<DensityMatrix> {
    let mut parts = Vec::with_capacity(terms);
    let mut weights: Vec<f64> = (0..terms).map(|_| rand::Rng::random::<f64>(rng) + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for _ in 0..terms {
        let mut psi = haar_random_state(&dims[..1], rng)?;
        for &d in &dims[1..] {
            psi = psi.tensor(&haar_random_state(&[d], rng)?);
        }
        parts.push(psi.to_density());
    }
    let refs: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(parts.iter()).collect();
    DensityMatrix::mixture(&refs)
}

/// Random mixed state: partial trace of a Haar-random purification with an ancilla of size `rank`.
pub fn random_mixed(dims: &[usize], rank: usize, rng: &mut ChaCha20Rng) -> Result<DensityMatrix> {
    let mut all = dims.to_vec();
    all.push(rank.max(1));
    let psi = haar_random_state(&all, rng)?;
    let keep: Vec<usize> = (0..dims.len()).collect();
    psi.to_density().partial_trace(&keep)
}

/// Scales the coherences of subsystem `qubit` by `1 − λ` (phase damping).
pub fn dephase(rho: &DensityMatrix, qubit: usize, lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::arg("states", format!("λ = {lambda} outside [0, 1]")));
    }
    let dims = rho.dims();
    if qubit >= dims.len() {
        return Err(Error::arg("states", format!("subsystem {qubit} out of range")));
    }
    let n = rho.dim();
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(n, n, |i, j| {
        let di = tensor::digits(i, dims)[qubit];
        let dj = tensor::digits(j, dims)[qubit];
        if di == dj {
            m.get(i, j)
        } else {
            m.get(i, j) * (1.0 - lambda)
        }
    });
    Ok(DensityMatrix::from_parts_unchecked(dims.to_vec(), out))
}

/// Catalog lookup by name: `bell1..bell4`, `ghz`, `w`, `wwbar`, `bs1..bs3`, `sep`,
/// `sigma` (NCC example), `e<n>` for `θ = nπ/30`.
pub fn catalog(name: &str) -> Result<DensityMatrix> {
    let lower = name.to_ascii_lowercase();
    let pure = |p: PureState| Ok(p.to_density());
    match lower.as_str() {
        "ghz" => pure(ghz()),
        "w" => pure(w()),
        "wwbar" | "w_wbar" => pure(w_wbar()),
        "sep" => pure(sep()),
        "sigma" | "ncc" => Ok(ncc_sigma()),
        "s1" => pure(product_s1()),
        "s2" => pure(product_s2()),
        _ => {
            if let Some(k) = lower.strip_prefix("bell").and_then(|s| s.parse().ok()) {
                pure(bell(k)?)
            } else if let Some(k) = lower.strip_prefix("bs").and_then(|s| s.parse().ok()) {
                pure(bs(k)?)
            } else if let Some(n) = lower.strip_prefix('e').and_then(|s| s.parse::<u32>().ok()) {
                pure(e_theta(n as f64 * std::f64::consts::PI / 30.0)?)
            } else {
                Err(Error::arg("states", format!("unknown catalog state '{name}'")))
            }
        }
    }
}

/// Separable reference `|00⟩`.
pub fn product_s1() -> PureState {
    PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 0.0]).expect("unit")
}

/// Separable reference `|++⟩`.
pub fn product_s2() -> PureState {
    PureState::from_real(vec![2, 2], &[0.5, 0.5, 0.5, 0.5]).expect("unit")
}
