//! Entanglement and nonclassicality quantifiers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliProductObservable};
use crate::tensor::{self, ComplexMatrix, C64, PSD_CLAMP};

fn check_cut(rho: &DensityMatrix, cut: usize) -> Result<()> {
    if rho.dims().len() < 2 || cut >= rho.dims().len() {
        return Err(Error::arg(
            "measures",
            format!("cut {cut} invalid for dims {:?}", rho.dims()),
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptCheck {
    pub is_ppt: bool,
    pub min_eig: f64,
}

/// Positivity of the partial transpose on subsystem `cut`.
pub fn ppt_check(rho: &DensityMatrix, cut: usize) -> Result<PptCheck> {
    check_cut(rho, cut)?;
    let min_eig = tensor::min_eigenvalue(&rho.partial_transpose(cut)?)?;
    Ok(PptCheck {
        is_ppt: min_eig >= -PSD_CLAMP,
        min_eig,
    })
}

/// `(‖ρ^{T_cut}‖₁ − 1)/2`.
pub fn negativity(rho: &DensityMatrix, cut: usize) -> Result<f64> {
    check_cut(rho, cut)?;
    let tn = tensor::trace_norm(&rho.partial_transpose(cut)?);
    Ok(((tn - 1.0) / 2.0).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcnrResult {
    pub sum_sv: f64,
    pub flags_entangled: bool,
}

/// Realignment criterion for a bipartite state.
pub fn ccnr(rho: &DensityMatrix) -> Result<CcnrResult> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::arg("measures", format!("CCNR needs a bipartite state, got dims {dims:?}")));
    }
    let r = tensor::realign(rho.matrix(), dims[0], dims[1])?;
    let sum_sv: f64 = tensor::singular_values(&r).iter().sum();
    Ok(CcnrResult {
        sum_sv,
        flags_entangled: sum_sv > 1.0 + 1e-9,
    })
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Majorization criterion: the spectrum of `ρ` must be majorized by that of `ρ_part`.
/// Returns `false` when the criterion detects entanglement.
pub fn majorization_check(rho: &DensityMatrix, part: usize) -> Result<bool> {
    check_cut(rho, part)?;
    let p = sorted_desc(rho.eig()?.values);
    let q = sorted_desc(rho.partial_trace(&[part])?.eig()?.values);
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..p.len() {
        sp += p[k];
        sq += q.get(k).copied().unwrap_or(0.0);
        if sp > sq + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eigenvalues below this (relative to the largest) are round-off and dropped before a square
/// root, which would otherwise inflate `1e-16` noise to `1e-8`.
const ROOT_FLOOR: f64 = 1e-14;

fn floored_sqrt(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let e = rho.eig()?;
    let cut = ROOT_FLOOR * e.max().max(0.0);
    Ok(e.reconstruct_with(|x| if x > cut { x.sqrt() } else { 0.0 }))
}

/// Uhlmann–Jozsa fidelity `‖√ρ₁ √ρ₂‖₁²`, symmetric by construction.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dims() != rho2.dims() {
        return Err(Error::Dimension(format!("{:?} vs {:?}", rho1.dims(), rho2.dims())));
    }
    let prod = floored_sqrt(rho1)?.matmul(&floored_sqrt(rho2)?)?;
    let root: f64 = tensor::singular_values(&prod).iter().sum();
    Ok(root * root)
}

fn check_three_qubit(dims: &[usize]) -> Result<()> {
    if dims != [2, 2, 2] {
        return Err(Error::arg("measures", format!("three-qubit input required, got dims {dims:?}")));
    }
    Ok(())
}

fn check_l(l: usize) -> Result<()> {
    if !(1..=3).contains(&l) {
        return Err(Error::arg("measures", format!("cut index {l} not in 1..=3")));
    }
    Ok(())
}

/// Squared concurrence `G_l` of the `l|rest` cut (1-based), i.e. `det ρ_l`.
pub fn concurrence_sq(psi: &PureState, l: usize) -> Result<f64> {
    check_three_qubit(psi.dims())?;
    check_l(l)?;
    let r = psi.to_density().partial_trace(&[l - 1])?;
    let m = r.matrix();
    Ok((m.get(0, 0).re * m.get(1, 1).re - m.get(0, 1).norm_sqr()).max(0.0))
}

/// `(pauli indices on (l, other, other), coefficient)` for the quadratic Pauli form of `G_l`.
const G_TERMS: [([usize; 3], f64); 15] = [
    ([0, 0, 3], -1.0),
    ([0, 3, 0], -1.0),
    ([3, 0, 0], -3.0),
    ([3, 3, 3], 1.0),
    ([3, 3, 0], 1.0),
    ([3, 0, 3], 1.0),
    ([0, 3, 3], -1.0),
    ([1, 0, 0], -3.0),
    ([1, 0, 3], 1.0),
    ([1, 3, 0], 1.0),
    ([1, 3, 3], 1.0),
    ([2, 0, 0], -3.0),
    ([2, 0, 3], 1.0),
    ([2, 3, 0], 1.0),
    ([2, 3, 3], 1.0),
];

/// `G_l` as a quadratic polynomial of Pauli expectations; the first index acts on qubit `l`.
pub fn g_pauli(rho: &DensityMatrix, l: usize) -> Result<f64> {
    check_three_qubit(rho.dims())?;
    check_l(l)?;
    let others: Vec<usize> = (0..3).filter(|&q| q != l - 1).collect();
    let mut s = 3.0;
    for (idx, coeff) in G_TERMS {
        let mut word = [Pauli::I; 3];
        word[l - 1] = Pauli::from_index(idx[0])?;
        word[others[0]] = Pauli::from_index(idx[1])?;
        word[others[1]] = Pauli::from_index(idx[2])?;
        let e = rho.expect(&PauliProductObservable::paulis(&word).matrix())?;
        s += coeff * e * e;
    }
    Ok(s / 16.0)
}

/// Three-tangle `4|d₁ − 2d₂ + 4d₃|` from the Cayley hyperdeterminant.
pub fn three_tangle(psi: &PureState) -> Result<f64> {
    check_three_qubit(psi.dims())?;
    let a = |i: usize| psi.amplitudes()[i];
    let d1 = a(0b000).powi(2) * a(0b111).powi(2)
        + a(0b001).powi(2) * a(0b110).powi(2)
        + a(0b010).powi(2) * a(0b101).powi(2)
        + a(0b100).powi(2) * a(0b011).powi(2);
    let d2 = a(0b000) * a(0b111) * a(0b011) * a(0b100)
        + a(0b000) * a(0b111) * a(0b101) * a(0b010)
        + a(0b000) * a(0b111) * a(0b110) * a(0b001)
        + a(0b011) * a(0b100) * a(0b101) * a(0b010)
        + a(0b011) * a(0b100) * a(0b110) * a(0b001)
        + a(0b101) * a(0b010) * a(0b110) * a(0b001);
    let d3 = a(0b000) * a(0b110) * a(0b101) * a(0b011) + a(0b111) * a(0b001) * a(0b010) * a(0b100);
    Ok(4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm())
}

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Von Neumann entropy in bits; `0·log 0 = 0`.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.eig()?.values.iter().map(|&x| xlog2x(x)).sum())
}

/// Entropy of an unnormalized 2×2 Hermitian block `m` (trace `p`), returned as `p·S(m/p)`.
fn weighted_entropy_2x2(a: f64, d: f64, b: C64) -> f64 {
    let p = a + d;
    if p <= 1e-15 {
        return 0.0;
    }
    let disc = ((a - d).powi(2) + 4.0 * b.norm_sqr()).sqrt();
    let l1 = (p + disc) / 2.0 / p;
    let l2 = (p - disc) / 2.0 / p;
    p * (xlog2x(l1) + xlog2x(l2))
}

/// Which subsystem is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub discord: f64,
    pub theta_opt: f64,
    pub phi_opt: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
}

/// Two-qubit state with the measured qubit moved to position 0.
fn measured_first(rho: &DensityMatrix, side: Side) -> Result<ComplexMatrix> {
    if rho.dims() != [2, 2] {
        return Err(Error::arg("measures", format!("discord needs two qubits, got dims {:?}", rho.dims())));
    }
    match side {
        Side::A => Ok(rho.matrix().clone()),
        Side::B => tensor::permute_subsystems(rho.matrix(), &[2, 2], &[1, 0]),
    }
}

/// `Σ_j p_j S(ρ_B|j)` for the projective measurement along `(θ, φ)` on qubit 0 of `m`.
fn conditional_entropy(m: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let mut total = 0.0;
    for s in [1.0, -1.0] {
        // Π = (I + s n·σ)/2
        let p00 = C64::new((1.0 + s * n[2]) / 2.0, 0.0);
        let p11 = C64::new((1.0 - s * n[2]) / 2.0, 0.0);
        let p01 = C64::new(s * n[0], -s * n[1]) / 2.0;
        let pi = [[p00, p01], [p01.conj(), p11]];
        // Tr_A[(Π ⊗ I) ρ]_{kl} = Σ_ij Π_ji ρ_(i k),(j l)
        let mut blk = [[C64::new(0.0, 0.0); 2]; 2];
        for (k, row) in blk.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        *entry += pi[j][i] * m.get(2 * i + k, 2 * j + l);
                    }
                }
            }
        }
        total += weighted_entropy_2x2(blk[0][0].re, blk[1][1].re, blk[0][1]);
    }
    total
}

const GRID: usize = 64;
const NM_STARTS: usize = 3;

/// Nelder–Mead on a 2-D function, simplex edge `h`.
fn nelder_mead(f: &dyn Fn(f64, f64) -> f64, x0: [f64; 2], h: f64) -> ([f64; 2], f64) {
    let mut s = [x0, [x0[0] + h, x0[1]], [x0[0], x0[1] + h]];
    let mut v = s.map(|p| f(p[0], p[1]));
    for _ in 0..400 {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let (b, m, w) = (idx[0], idx[1], idx[2]);
        if (v[w] - v[b]).abs() < 1e-14 && (s[w][0] - s[b][0]).abs().max((s[w][1] - s[b][1]).abs()) < 1e-10 {
            break;
        }
        let c = [(s[b][0] + s[m][0]) / 2.0, (s[b][1] + s[m][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (s[w][0] - c[0]), c[1] + t * (s[w][1] - c[1])];
        let r = at(-1.0);
        let fr = f(r[0], r[1]);
        if fr < v[b] {
            let e = at(-2.0);
            let fe = f(e[0], e[1]);
            if fe < fr {
                s[w] = e;
                v[w] = fe;
            } else {
                s[w] = r;
                v[w] = fr;
            }
        } else if fr < v[m] {
            s[w] = r;
            v[w] = fr;
        } else {
            let k = if fr < v[w] { at(-0.5) } else { at(0.5) };
            let fk = f(k[0], k[1]);
            if fk < v[w].min(fr) {
                s[w] = k;
                v[w] = fk;
            } else {
                for i in [m, w] {
                    s[i] = [(s[i][0] + s[b][0]) / 2.0, (s[i][1] + s[b][1]) / 2.0];
                    v[i] = f(s[i][0], s[i][1]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| v[a].total_cmp(&v[b])).expect("three vertices");
    (s[best], v[best])
}

fn discord_from_min(rho: &DensityMatrix, side: Side, cond_min: f64, th: f64, ph: f64) -> Result<DiscordResult> {
    let (measured, other) = match side {
        Side::A => (0, 1),
        Side::B => (1, 0),
    };
    let s_ab = entropy(rho)?;
    let s_m = entropy(&rho.partial_trace(&[measured])?)?;
    let s_o = entropy(&rho.partial_trace(&[other])?)?;
    let mutual_info = s_m + s_o - s_ab;
    let classical_corr = s_o - cond_min;
    Ok(DiscordResult {
        discord: (mutual_info - classical_corr).max(0.0),
        theta_opt: th,
        phi_opt: ph.rem_euclid(2.0 * PI),
        mutual_info,
        classical_corr,
    })
}

/// Discord with measurement on subsystem A.
pub fn discord(rho: &DensityMatrix) -> Result<DiscordResult> {
    discord_side(rho, Side::A)
}

/// Discord: 64×64 grid over the Bloch sphere, then Nelder–Mead from the best three cells.
pub fn discord_side(rho: &DensityMatrix, side: Side) -> Result<DiscordResult> {
    let m = measured_first(rho, side)?;
    let f = |t: f64, p: f64| conditional_entropy(&m, t, p);
    let dt = PI / (GRID - 1) as f64;
    let dp = 2.0 * PI / GRID as f64;
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            cells.push((f(t, p), t, p));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = cells[0];
    for &(_, t, p) in cells.iter().take(NM_STARTS) {
        let (x, v) = nelder_mead(&f, [t, p], dt / 2.0);
        if v < best.0 {
            best = (v, x[0], x[1]);
        }
    }
    // Fold θ back into [0, π] without changing the measurement.
    let mut th = best.1.rem_euclid(2.0 * PI);
    let mut ph = best.2;
    if th > PI {
        th = 2.0 * PI - th;
        ph += PI;
    }
    discord_from_min(rho, side, best.0, th, ph)
}

/// Brute-force oracle: exhaustive `n × n` grid, no refinement.
pub fn discord_grid(rho: &DensityMatrix, side: Side, n: usize) -> Result<DiscordResult> {
    let m = measured_first(rho, side)?;
    let n = n.max(2);
    let dt = PI / (n - 1) as f64;
    let dp = 2.0 * PI / (n - 1) as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            let v = conditional_entropy(&m, t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    discord_from_min(rho, side, best.0, best.1, best.2)
}

/// All measures for one state, as emitted by the `measure` subcommand.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct MeasureRecord {
    pub dims: Vec<usize>,
    pub purity: f64,
    pub negativity: Option<f64>,
    pub ppt_min_eig: Option<f64>,
    pub ccnr_sum: Option<f64>,
    pub majorization_ok: Option<bool>,
    pub discord_a: Option<f64>,
    pub discord_b: Option<f64>,
    pub three_tangle: Option<f64>,
    pub g: Option<[f64; 3]>,
}

/// Pure-state vector recovered from a rank-one density matrix.
pub fn as_pure(rho: &DensityMatrix) -> Option<PureState> {
    let e = rho.eig().ok()?;
    if (e.max() - 1.0).abs() > 1e-9 {
        return None;
    }
    let v = e.vector(e.values.len() - 1);
    PureState::normalized(rho.dims().to_vec(), v).ok()
}

pub fn measure_all(rho: &DensityMatrix) -> Result<MeasureRecord> {
    let mut r = MeasureRecord {
        dims: rho.dims().to_vec(),
        purity: rho.purity(),
        ..Default::default()
    };
    if rho.dims().len() >= 2 {
        r.negativity = Some(negativity(rho, 0)?);
        r.ppt_min_eig = Some(ppt_check(rho, 0)?.min_eig);
        r.majorization_ok = Some(majorization_check(rho, 0)?);
    }
    if rho.dims().len() == 2 {
        r.ccnr_sum = Some(ccnr(rho)?.sum_sv);
    }
    if rho.dims() == [2, 2] {
        r.discord_a = Some(discord_side(rho, Side::A)?.discord);
        r.discord_b = Some(discord_side(rho, Side::B)?.discord);
    }
    if rho.dims() == [2, 2, 2] {
        if let Some(psi) = as_pure(rho) {
            r.three_tangle = Some(three_tangle(&psi)?);
            r.g = Some([
                concurrence_sq(&psi, 1)?,
                concurrence_sq(&psi, 2)?,
                concurrence_sq(&psi, 3)?,
            ]);
        }
    }
    Ok(r)
}
