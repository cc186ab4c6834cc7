//! Decomposable entanglement witnesses from local expectation values, the qubit–qutrit
//! witness and its truncations, and the nonclassicality (NCC) map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{cnot, controlled_hadamard, embed_single};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::measures::{discord_side, DiscordResult, Side};
use crate::pauli::{gell_mann, LocalOp, Pauli, PauliProductObservable};
use crate::sdp::{self, LmiBlock, LmiProblem, SdpOptions, SdpStatus};
use crate::states::{dephase, haar_unitary};
use crate::tensor::{self, partial_transpose_op, ComplexMatrix, C64, ONE};

/// `min c·m` below this certifies entanglement.
pub const DETECTION_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub min_ctm: f64,
    /// Identity coefficient fixed by `Tr W = 1`.
    pub c0: f64,
    pub coeffs: Vec<f64>,
    pub witness: ComplexMatrix,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
    pub operators: Vec<String>,
    pub detected: bool,
    pub rounds: usize,
    /// Subsystem carrying the partial transpose in `W = P + Q^{T}`.
    pub pt_side: usize,
}

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    pub pt_side: usize,
    pub sdp: SdpOptions,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            pt_side: 0,
            sdp: SdpOptions::default(),
        }
    }
}

/// Basis of `d × d` Hermitian matrices: `E_ii`, `E_ij + E_ji`, `i(E_ij − E_ji)` for `i < j`.
fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut m = ComplexMatrix::zeros(d, d);
        m.set(i, i, ONE);
        out.push(m);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut re = ComplexMatrix::zeros(d, d);
            re.set(i, j, ONE);
            re.set(j, i, ONE);
            out.push(re);
            let mut im = ComplexMatrix::zeros(d, d);
            im.set(i, j, C64::new(0.0, 1.0));
            im.set(j, i, C64::new(0.0, -1.0));
            out.push(im);
        }
    }
    out
}

fn traceless(o: &ComplexMatrix) -> ComplexMatrix {
    let d = o.rows();
    let t = o.trace().re / d as f64;
    o.try_sub(&ComplexMatrix::identity(d).scale_re(t)).expect("square")
}

/// Smallest Gram eigenvalue of the traceless parts, relative to the largest.
fn independence(ops: &[ComplexMatrix]) -> Result<f64> {
    let hat: Vec<ComplexMatrix> = ops.iter().map(traceless).collect();
    let k = hat.len();
    let mut g = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g.set(i, j, C64::new(hat[i].trace_product(&hat[j])?.re, 0.0));
        }
    }
    let e = tensor::eigenvalues(&g)?;
    let max = e.last().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return Ok(0.0);
    }
    Ok(e[0] / max)
}

const INDEPENDENCE_TOL: f64 = 1e-9;

/// Minimizes `Tr(Wρ) = c0 + Σ c_k m_k` over decomposable unit-trace witnesses in
/// `span{I, O_k}`; `m_k` are the measured `⟨O_k⟩`.
pub fn witness_sdp(ops: &[PauliProductObservable], m: &[f64]) -> Result<WitnessReport> {
    witness_sdp_with(ops, m, &WitnessOptions::default())
}

pub fn witness_sdp_with(
    ops: &[PauliProductObservable],
    m: &[f64],
    opts: &WitnessOptions,
) -> Result<WitnessReport> {
    if ops.is_empty() || ops.len() != m.len() {
        return Err(Error::arg(
            "witnesses",
            format!("{} operators against {} expectations", ops.len(), m.len()),
        ));
    }
    let dims = ops[0].dims();
    if dims.len() != 2 || ops.iter().any(|o| o.dims() != dims) {
        return Err(Error::arg("witnesses", "operators must share one bipartite dims list"));
    }
    if opts.pt_side > 1 {
        return Err(Error::arg("witnesses", "partial transpose side must be 0 or 1"));
    }
    let mats: Vec<ComplexMatrix> = ops.iter().map(PauliProductObservable::matrix).collect();
    if independence(&mats)? < INDEPENDENCE_TOL {
        return Err(Error::arg("witnesses", "operators are linearly dependent modulo identity"));
    }
    let d = dims[0] * dims[1];
    let df = d as f64;
    let hats: Vec<ComplexMatrix> = mats.iter().map(traceless).collect();
    let basis = hermitian_basis(d);
    let kc = ops.len();
    let nv = kc + basis.len();
    let pt = |x: &ComplexMatrix| partial_transpose_op(x, &dims, opts.pt_side).expect("dims checked");

    let zero = ComplexMatrix::zeros(d, d);
    let mut p_fk = vec![zero.clone(); kc];
    p_fk.extend(basis.iter().cloned());
    let mut q_fk: Vec<ComplexMatrix> = hats.iter().map(pt).collect();
    q_fk.extend(basis.iter().map(|h| pt(h).scale_re(-1.0)));
    let blocks = vec![
        LmiBlock { f0: zero, fk: p_fk },
        LmiBlock {
            f0: ComplexMatrix::identity(d).scale_re(1.0 / df),
            fk: q_fk,
        },
    ];
    let mut objective: Vec<f64> = mats
        .iter()
        .zip(m)
        .map(|(o, mk)| mk - o.trace().re / df)
        .collect();
    objective.extend(std::iter::repeat(0.0).take(basis.len()));
    let problem = LmiProblem::new(objective, blocks)?;

    // c = 0, P = I/(2d) is strictly feasible: W − P = I/(2d).
    let mut start = vec![0.0; nv];
    for i in 0..d {
        start[kc + i] = 1.0 / (2.0 * df);
    }
    let sdp_opts = SdpOptions {
        start: Some(start),
        ..opts.sdp.clone()
    };
    let sol = sdp::solve(&problem, &sdp_opts)?;
    match sol.status {
        SdpStatus::Optimal => {}
        SdpStatus::IterationLimit => return Err(Error::IterationLimit(sol.iterations)),
        SdpStatus::InfeasibleCertified => {
            return Err(Error::Solver("witness program reported infeasible".into()))
        }
    }
    let c = sol.x[..kc].to_vec();
    let mut w = ComplexMatrix::identity(d).scale_re(1.0 / df);
    for (ck, h) in c.iter().zip(&hats) {
        w = w.try_add(&h.scale_re(*ck))?;
    }
    let mut p = ComplexMatrix::zeros(d, d);
    for (xj, h) in sol.x[kc..].iter().zip(&basis) {
        p = p.try_add(&h.scale_re(*xj))?;
    }
    let q = pt(&w.try_sub(&p)?);
    let c0 = (1.0 - c.iter().zip(&mats).map(|(ck, o)| ck * o.trace().re).sum::<f64>()) / df;
    let min_ctm = 1.0 / df + sol.objective;
    Ok(WitnessReport {
        min_ctm,
        c0,
        coeffs: c,
        witness: w,
        p,
        q,
        operators: ops.iter().map(PauliProductObservable::label).collect(),
        detected: min_ctm < -DETECTION_TOL,
        rounds: ops.len(),
        pt_side: opts.pt_side,
    })
}

/// Random local product observable: Haar-rotated σz on the qubit, Haar-rotated λ₃ on a qutrit.
pub fn random_local_observable(dims: &[usize], rng: &mut ChaCha20Rng) -> Result<PauliProductObservable> {
    let factors = dims
        .iter()
        .map(|&d| {
            let base = match d {
                2 => Pauli::Z.matrix(),
                3 => gell_mann(3)?,
                _ => return Err(Error::arg("witnesses", format!("local dimension {d} unsupported"))),
            };
            let u = haar_unitary(d, rng);
            Ok(LocalOp::Matrix(base.conjugate_by(&u)?.hermitian_part()))
        })
        .collect::<Result<Vec<_>>>()?;
    PauliProductObservable::new(factors, 1.0)
}

/// Correlation operators tried first: `σ_iσ_i` for two qubits, `σ_i⊗λ_i` for qubit–qutrit.
pub fn correlation_operators(dims: &[usize]) -> Result<Vec<PauliProductObservable>> {
    match dims {
        [2, 2] => Ok([Pauli::X, Pauli::Y, Pauli::Z]
            .iter()
            .map(|&p| PauliProductObservable::paulis(&[p, p]))
            .collect()),
        [2, 3] => Ok((1..=3u8)
            .map(|k| {
                PauliProductObservable::new(
                    vec![LocalOp::Pauli(Pauli::from_index(k as usize).expect("1..=3")), LocalOp::GellMann(k)],
                    1.0,
                )
                .expect("valid word")
            })
            .collect()),
        _ => Err(Error::arg("witnesses", format!("dims {dims:?} not supported (2⊗2 or 2⊗3)"))),
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolOptions {
    pub max_rounds: usize,
    pub correlation_first: bool,
    pub witness: WitnessOptions,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        Self {
            max_rounds: 10,
            correlation_first: true,
            witness: WitnessOptions::default(),
        }
    }
}

/// Adds one local observable per round and re-solves until detection or `max_rounds`.
pub fn random_measurement_protocol(
    rho: &DensityMatrix,
    seed: u64,
    opts: &ProtocolOptions,
) -> Result<WitnessReport> {
    let dims = rho.dims().to_vec();
    let mut queue = if opts.correlation_first {
        correlation_operators(&dims)?
    } else {
        correlation_operators(&dims)?;
        Vec::new()
    };
    queue.reverse();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut ops: Vec<PauliProductObservable> = Vec::new();
    let mut last: Option<WitnessReport> = None;
    let mut draws = 0usize;
    while ops.len() < opts.max_rounds {
        let cand = match queue.pop() {
            Some(o) => o,
            None => random_local_observable(&dims, &mut rng)?,
        };
        draws += 1;
        if draws > 100 * opts.max_rounds.max(1) {
            return Err(Error::Solver("could not draw independent observables".into()));
        }
        let mut trial = ops.clone();
        trial.push(cand);
        let mats: Vec<ComplexMatrix> = trial.iter().map(PauliProductObservable::matrix).collect();
        if independence(&mats)? < INDEPENDENCE_TOL {
            continue;
        }
        let m: Vec<f64> = mats.iter().map(|o| rho.expect(o)).collect::<Result<_>>()?;
        let report = witness_sdp_with(&trial, &m, &opts.witness)?;
        ops = trial;
        let done = report.detected;
        last = Some(report);
        if done {
            break;
        }
    }
    last.ok_or_else(|| Error::arg("witnesses", "max_rounds must be at least 1"))
}

/// `(u, v, β)` in `O = (1/6)[I + σ·u⊗I + √3 I⊗λ·v + Σ β_ij σ_i⊗λ_j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitQutritDecomposition {
    pub u: [f64; 3],
    pub v: [f64; 8],
    pub beta: [[f64; 8]; 3],
}

impl QubitQutritDecomposition {
    /// Expands a unit-trace Hermitian 6×6 operator.
    pub fn of(w: &ComplexMatrix) -> Result<Self> {
        if w.rows() != 6 || !w.is_square() {
            return Err(Error::Dimension("qubit–qutrit operator must be 6×6".into()));
        }
        if (w.trace().re - 1.0).abs() > 1e-10 {
            return Err(Error::arg("witnesses", "decomposition assumes unit trace"));
        }
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        let sig = |i: usize| Pauli::from_index(i).expect("1..=3").matrix();
        let lam = |j: usize| gell_mann(j).expect("1..=8");
        let tr = |o: &ComplexMatrix| w.trace_product(o).map(|z| z.re);
        let mut d = Self {
            u: [0.0; 3],
            v: [0.0; 8],
            beta: [[0.0; 8]; 3],
        };
        for i in 0..3 {
            d.u[i] = tr(&tensor::kron(&sig(i + 1), &i3))?;
        }
        for j in 0..8 {
            d.v[j] = 3f64.sqrt() / 2.0 * tr(&tensor::kron(&i2, &lam(j + 1)))?;
        }
        for i in 0..3 {
            for j in 0..8 {
                d.beta[i][j] = 1.5 * tr(&tensor::kron(&sig(i + 1), &lam(j + 1)))?;
            }
        }
        Ok(d)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        let mut o = ComplexMatrix::identity(6);
        for i in 0..3 {
            let s = Pauli::from_index(i + 1).expect("1..=3").matrix();
            o = &o + &tensor::kron(&s, &i3).scale_re(self.u[i]);
            for j in 0..8 {
                if self.beta[i][j] != 0.0 {
                    let l = gell_mann(j + 1).expect("1..=8");
                    o = &o + &tensor::kron(&s, &l).scale_re(self.beta[i][j]);
                }
            }
        }
        for j in 0..8 {
            let l = gell_mann(j + 1).expect("1..=8");
            o = &o + &tensor::kron(&i2, &l).scale_re(3f64.sqrt() * self.v[j]);
        }
        o.scale_re(1.0 / 6.0)
    }

    /// Labels of coefficients with `|value| > tol`, e.g. `v8`, `beta11`.
    pub fn nonzero(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (i, x) in self.u.iter().enumerate() {
            if x.abs() > tol {
                out.push(format!("u{}", i + 1));
            }
        }
        for (j, x) in self.v.iter().enumerate() {
            if x.abs() > tol {
                out.push(format!("v{}", j + 1));
            }
        }
        for i in 0..3 {
            for j in 0..8 {
                if self.beta[i][j].abs() > tol {
                    out.push(format!("beta{}{}", i + 1, j + 1));
                }
            }
        }
        out
    }
}

/// `W = (|φ⁺⟩⟨φ⁺|)^{T_A}` with basis index `3·qubit + qutrit`, and its decomposition.
pub fn qubit_qutrit_witness() -> (ComplexMatrix, QubitQutritDecomposition) {
    let mut w = ComplexMatrix::zeros(6, 6);
    let h = C64::new(0.5, 0.0);
    w.set(0, 0, h);
    w.set(4, 4, h);
    w.set(1, 3, h);
    w.set(3, 1, h);
    let d = QubitQutritDecomposition::of(&w).expect("unit trace 6×6");
    (w, d)
}

/// The 6×6 matrix exactly as printed in the source, kept for comparison only.
pub fn qubit_qutrit_witness_as_printed() -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(6, 6);
    let h = C64::new(0.5, 0.0);
    w.set(0, 0, h);
    w.set(5, 5, h);
    w.set(1, 3, h);
    w.set(3, 1, h);
    w
}

/// The four local operators of the canonical witness with their weights in `W`:
/// `σ_x⊗λ₁`, `σ_y⊗λ₂`, `σ_z⊗λ₃` with weight ¼ and `I⊗λ₈` with weight `1/(4√3)`.
pub fn canonical_terms() -> Vec<(String, ComplexMatrix, f64)> {
    let mut out = Vec::with_capacity(4);
    for k in 1..=3 {
        let s = Pauli::from_index(k).expect("1..=3").matrix();
        out.push((
            format!("beta{k}{k}"),
            tensor::kron(&s, &gell_mann(k).expect("1..=3")),
            0.25,
        ));
    }
    out.push((
        "v8".to_string(),
        tensor::kron(&ComplexMatrix::identity(2), &gell_mann(8).expect("8")),
        1.0 / (4.0 * 3f64.sqrt()),
    ));
    out
}

/// Qubit–qutrit family operator for any `(α, γ)`, without the `β ≥ 0` validity check.
fn qubit_qutrit_operator(alpha: f64, gamma: f64) -> ComplexMatrix {
    let beta = (1.0 - 2.0 * alpha - gamma) / 3.0;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let vec = |entries: &[(usize, f64)]| {
        let mut v = vec![C64::new(0.0, 0.0); 6];
        for &(i, a) in entries {
            v[i] = C64::new(a, 0.0);
        }
        v
    };
    let proj = |v: Vec<C64>| ComplexMatrix::outer(&v, &v);
    let mut m = ComplexMatrix::zeros(6, 6);
    m.add_at(2, 2, C64::new(alpha, 0.0));
    m.add_at(5, 5, C64::new(alpha, 0.0));
    for (v, wt) in [
        (vec(&[(0, h), (4, h)]), beta),
        (vec(&[(0, h), (4, -h)]), beta),
        (vec(&[(1, h), (3, h)]), beta),
        (vec(&[(1, h), (3, -h)]), gamma),
    ] {
        m = &m + &proj(v).scale_re(wt);
    }
    m
}

/// Sampling region for the detection-fraction Monte Carlo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SampleRegion {
    /// `α ∈ [0, ½]`, `γ ∈ [0, 1]`: the plotted parameter rectangle (β may be negative).
    #[default]
    PlotRectangle,
    /// Valid states only (`β ≥ 0`).
    PhysicalTriangle,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsetFraction {
    pub terms: Vec<String>,
    pub fraction: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectionFraction {
    pub n_ops: usize,
    pub best: f64,
    /// Smallest nonzero subset fraction; subsets detecting nothing are not witnesses.
    pub worst: f64,
    pub subsets: Vec<SubsetFraction>,
    pub entangled_samples: usize,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Fraction of sampled entangled points (`2α + 2γ > 1`) with `Tr(W_S ρ) < 0`, where
/// `W_S = I/6 + Σ_{k∈S} w_k O_k` keeps `n_ops` of the four canonical terms. All subsets are reported.
pub fn detection_fraction(n_ops: usize, samples: usize, seed: u64, region: SampleRegion) -> Result<DetectionFraction> {
    if !(1..=4).contains(&n_ops) {
        return Err(Error::arg("witnesses", format!("n_ops {n_ops} not in 1..=4")));
    }
    let terms = canonical_terms();
    // ⟨O_k⟩ is affine in (α, γ): e0 + α eα + γ eγ.
    let affine: Vec<[f64; 3]> = terms
        .iter()
        .map(|(_, o, _)| {
            let at = |a: f64, g: f64| qubit_qutrit_operator(a, g).trace_product(o).expect("6×6").re;
            let e0 = at(0.0, 0.0);
            [e0, at(1.0, 0.0) - e0, at(0.0, 1.0) - e0]
        })
        .collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(samples);
    while points.len() < samples {
        let a: f64 = rng.random::<f64>() * 0.5;
        let g: f64 = rng.random::<f64>();
        if region == SampleRegion::PhysicalTriangle && 2.0 * a + g > 1.0 {
            continue;
        }
        points.push((a, g));
    }
    let entangled: Vec<(f64, f64)> = points.into_iter().filter(|(a, g)| 2.0 * a + 2.0 * g > 1.0).collect();
    if entangled.is_empty() {
        return Err(Error::arg("witnesses", "no entangled samples drawn"));
    }
    let mut out = Vec::new();
    for s in subsets(terms.len(), n_ops) {
        let hits = entangled
            .iter()
            .filter(|(a, g)| {
                let v: f64 = 1.0 / 6.0
                    + s.iter()
                        .map(|&k| terms[k].2 * (affine[k][0] + a * affine[k][1] + g * affine[k][2]))
                        .sum::<f64>();
                v < 0.0
            })
            .count();
        out.push(SubsetFraction {
            terms: s.iter().map(|&k| terms[k].0.clone()).collect(),
            fraction: hits as f64 / entangled.len() as f64,
        });
    }
    let best = out.iter().map(|s| s.fraction).fold(0.0, f64::max);
    let worst = out
        .iter()
        .map(|s| s.fraction)
        .filter(|&f| f > 0.0)
        .fold(f64::INFINITY, f64::min);
    Ok(DetectionFraction {
        n_ops,
        best,
        worst: if worst.is_finite() { worst } else { 0.0 },
        subsets: out,
        entangled_samples: entangled.len(),
    })
}

/// `â[1 + 2√(â(1−â))]/8`, the optimal constant of the NCC map.
fn c_of(a: f64) -> f64 {
    a * (1.0 + 2.0 * (a * (1.0 - a)).max(0.0).sqrt()) / 8.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct COpt {
    pub c_opt: f64,
    pub a_hat: f64,
}

pub fn ncc_c_opt() -> COpt {
    let a_hat = (2.0 + std::f64::consts::SQRT_2) / 4.0;
    COpt {
        c_opt: c_of(a_hat),
        a_hat,
    }
}

/// Golden-section maximization of the same expression on `[0, 1]`; an independent cross-check.
pub fn ncc_c_opt_search() -> COpt {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if c_of(x1) < c_of(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let a_hat = (lo + hi) / 2.0;
    COpt {
        c_opt: c_of(a_hat),
        a_hat,
    }
}

fn two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::arg("witnesses", format!("two-qubit state required, got dims {:?}", rho.dims())));
    }
    Ok(())
}

/// `c_opt − ⟨00|ρ|00⟩·⟨1+|ρ|1+⟩`; negative values certify a state without product eigenbasis.
pub fn ncc_map_value(rho: &DensityMatrix) -> Result<f64> {
    two_qubit(rho)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one_plus = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(h, 0.0)];
    let p00 = rho.matrix().get(0, 0).re;
    let p1p = tensor::inner(&one_plus, &rho.matrix().apply(&one_plus)?).re;
    Ok(ncc_c_opt().c_opt - p00 * p1p)
}

/// Magnetization form `c_opt − (1+z1+z2+z2′)(1−z1+z2−z2′)/16`.
pub fn ncc_map_from_magnetizations(z1: f64, z2: f64, z2p: f64) -> Result<f64> {
    if [z1, z2, z2p].iter().any(|z| !(-1.0 - 1e-12..=1.0 + 1e-12).contains(z)) {
        return Err(Error::arg("witnesses", "magnetizations must lie in [−1, 1]"));
    }
    Ok(ncc_c_opt().c_opt - (1.0 + z1 + z2 + z2p) * (1.0 - z1 + z2 - z2p) / 16.0)
}

/// `(⟨Z₁⟩, ⟨Z₂⟩)` after CH(1→2) and `⟨Z₂⟩` after a further CNOT(1→2), by circuit simulation.
pub fn ncc_circuit_magnetizations(rho: &DensityMatrix) -> Result<(f64, f64, f64)> {
    two_qubit(rho)?;
    let z = Pauli::Z.matrix();
    let z1 = embed_single(&z, 0, 2)?;
    let z2 = embed_single(&z, 1, 2)?;
    let after_ch = rho.evolve(&controlled_hadamard(0, 1, 2)?.unitary)?;
    let after_cnot = after_ch.evolve(&cnot(0, 1, 2)?.unitary)?;
    Ok((after_ch.expect(&z1)?, after_ch.expect(&z2)?, after_cnot.expect(&z2)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MvPoint {
    pub lambda: f64,
    pub mv: f64,
    pub discord: f64,
}

/// Map value and discord (measured on B) after dephasing qubit 2 with strength `λ`.
pub fn mv_dynamics(rho0: &DensityMatrix, lambdas: &[f64]) -> Result<Vec<MvPoint>> {
    two_qubit(rho0)?;
    lambdas
        .iter()
        .map(|&l| {
            let r = dephase(rho0, 1, l)?;
            let DiscordResult { discord, .. } = discord_side(&r, Side::B)?;
            Ok(MvPoint {
                lambda: l,
                mv: ncc_map_value(&r)?,
                discord,
            })
        })
        .collect()
}

/// Bisection for the dephasing strength where the map value changes sign.
pub fn mv_sign_change(rho0: &DensityMatrix) -> Result<Option<f64>> {
    let f = |l: f64| -> Result<f64> { ncc_map_value(&dephase(rho0, 1, l)?) };
    let (mut lo, mut hi) = (0.0, 1.0);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo.signum() == fhi.signum() {
        return Ok(None);
    }
    for _ in 0..100 {
        let mid = (lo + hi) / 2.0;
        if f(mid)?.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo + hi) / 2.0))
}
