//! Dense log-det barrier solver for linear matrix inequalities.
//!
//! Problem form: minimize `c·x` subject to `F0_b + Σ_k x_k F_bk ⪰ 0` for every block `b`.
//! Equalities are expected to be eliminated by the caller through re-parameterization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{self, ComplexMatrix, C64, ZERO};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LmiBlock {
    pub f0: ComplexMatrix,
    pub fk: Vec<ComplexMatrix>,
}

impl LmiBlock {
    pub fn size(&self) -> usize {
        self.f0.rows()
    }

    /// `F0 + Σ x_k F_k`.
    pub fn eval(&self, x: &[f64]) -> ComplexMatrix {
        let n = self.size();
        let mut m = self.f0.clone();
        for (xk, fk) in x.iter().zip(&self.fk) {
            if *xk == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let z = fk.get(i, j);
                    if z != ZERO {
                        m.add_at(i, j, z * *xk);
                    }
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LmiProblem {
    pub nvars: usize,
    pub objective: Vec<f64>,
    pub blocks: Vec<LmiBlock>,
}

impl LmiProblem {
    pub fn new(objective: Vec<f64>, blocks: Vec<LmiBlock>) -> Result<Self> {
        let nvars = objective.len();
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::arg("sdp", "objective has non-finite entries"));
        }
        for (b, blk) in blocks.iter().enumerate() {
            let n = blk.size();
            if !blk.f0.is_square() || blk.fk.len() != nvars {
                return Err(Error::arg(
                    "sdp",
                    format!("block {b}: expected {nvars} coefficient matrices, got {}", blk.fk.len()),
                ));
            }
            for m in std::iter::once(&blk.f0).chain(&blk.fk) {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::Dimension(format!("block {b}: mixed matrix sizes")));
                }
                let e = m.hermiticity_error();
                if e > 1e-10 {
                    return Err(Error::NotHermitian(e));
                }
            }
        }
        Ok(Self {
            nvars,
            objective,
            blocks,
        })
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Smallest eigenvalue over all blocks at `x`.
    pub fn min_eig_at(&self, x: &[f64]) -> Result<f64> {
        let mut m = f64::INFINITY;
        for blk in &self.blocks {
            m = m.min(tensor::min_eigenvalue(&blk.eval(x))?);
        }
        Ok(m)
    }

    fn barrier_degree(&self) -> f64 {
        self.blocks.iter().map(|b| b.size() as f64).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Optimal,
    InfeasibleCertified,
    IterationLimit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub mu: f64,
    pub objective: f64,
    pub min_eig: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub min_block_eig: f64,
    pub iterations: usize,
    /// Duality-gap bound `m/t` at termination.
    pub gap: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<TraceRecord>,
}

impl SdpSolution {
    /// Iteration trace as JSON lines.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("plain record"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Clone, Debug)]
pub struct SdpOptions {
    pub max_iter: usize,
    pub max_newton: usize,
    /// Stop once the barrier gap bound `m/t` drops below this.
    pub gap_tol: f64,
    /// Barrier weight reduction per outer iteration (`t ← t / mu_factor`).
    pub mu_factor: f64,
    pub t0: f64,
    pub record_trace: bool,
    /// Starting point; when absent or not strictly feasible a phase-I search runs first.
    pub start: Option<Vec<f64>>,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            max_newton: 50,
            gap_tol: 1e-9,
            mu_factor: 0.2,
            t0: 1.0,
            record_trace: false,
            start: None,
        }
    }
}

/// Inverse and log-determinant of a Hermitian positive definite matrix, or `None`.
fn hpd_inverse(a: &ComplexMatrix) -> Option<(ComplexMatrix, f64)> {
    let l = tensor::cholesky(a)?;
    let n = a.rows();
    let logdet = 2.0 * (0..n).map(|i| l.get(i, i).re.ln()).sum::<f64>();
    // Solve L Y = I column by column, then A⁻¹ = Y† Y.
    let mut y = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        for i in c..n {
            let mut s = if i == c { C64::new(1.0, 0.0) } else { ZERO };
            for k in c..i {
                s -= l.get(i, k) * y.get(k, c);
            }
            y.set(i, c, s / l.get(i, i).re);
        }
    }
    let inv = y.dagger().matmul(&y).ok()?;
    Some((inv, logdet))
}

fn barrier_value(p: &LmiProblem, x: &[f64], t: f64) -> Option<f64> {
    let mut v = t * p.objective_at(x);
    for blk in &p.blocks {
        let l = tensor::cholesky(&blk.eval(x))?;
        let n = blk.size();
        v -= 2.0 * (0..n).map(|i| l.get(i, i).re.ln()).sum::<f64>();
    }
    v.is_finite().then_some(v)
}

/// Solves the dense symmetric positive definite system `H d = r` with a small ridge fallback.
fn solve_spd(h: &[f64], r: &[f64], n: usize) -> Option<Vec<f64>> {
    let diag_scale = (0..n).map(|i| h[i * n + i].abs()).fold(0.0, f64::max).max(1e-300);
    for ridge in [0.0, 1e-14, 1e-12, 1e-10, 1e-8] {
        let mut l = vec![0.0; n * n];
        let mut ok = true;
        'outer: for j in 0..n {
            let mut d = h[j * n + j] + ridge * diag_scale;
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= 0.0 || !d.is_finite() {
                ok = false;
                break 'outer;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let mut s = h[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        if !ok {
            continue;
        }
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = r[i];
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        return Some(x);
    }
    None
}

/// Gradient and Hessian of `t·c·x − Σ log det F_b(x)`.
fn grad_hess(p: &LmiProblem, x: &[f64], t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let nv = p.nvars;
    let mut g: Vec<f64> = p.objective.iter().map(|c| t * c).collect();
    let mut h = vec![0.0; nv * nv];
    for blk in &p.blocks {
        let (finv, _) = hpd_inverse(&blk.eval(x))?;
        let n = blk.size();
        // G_k = F_k F⁻¹; then Tr(F⁻¹F_k) = Tr(G_k) and H_kl = Tr(G_k G_l).
        let gk: Vec<ComplexMatrix> = blk
            .fk
            .iter()
            .map(|fk| fk.matmul(&finv).expect("block sizes checked"))
            .collect();
        let nonzero: Vec<bool> = blk.fk.iter().map(|f| f.data().iter().any(|z| *z != ZERO)).collect();
        for k in 0..nv {
            if !nonzero[k] {
                continue;
            }
            g[k] -= gk[k].trace().re;
            for l in k..nv {
                if !nonzero[l] {
                    continue;
                }
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += (gk[k].get(i, j) * gk[l].get(j, i)).re;
                    }
                }
                h[k * nv + l] += s;
                if l != k {
                    h[l * nv + k] += s;
                }
            }
        }
    }
    Some((g, h))
}

fn strictly_feasible(p: &LmiProblem, x: &[f64]) -> bool {
    p.blocks.iter().all(|b| tensor::cholesky(&b.eval(x)).is_some())
}

struct PathResult {
    x: Vec<f64>,
    t: f64,
    outer: usize,
    converged: bool,
    trace: Vec<TraceRecord>,
}

/// Barrier path following from a strictly feasible `x`. `early_stop` ends the run as soon as it holds.
fn follow_path(
    p: &LmiProblem,
    mut x: Vec<f64>,
    opts: &SdpOptions,
    early_stop: Option<&dyn Fn(&[f64]) -> bool>,
) -> Result<PathResult> {
    let m = p.barrier_degree();
    let mut t = opts.t0;
    let mut trace = Vec::new();
    let nv = p.nvars;
    for outer in 0..opts.max_iter {
        for _ in 0..opts.max_newton {
            let Some((g, h)) = grad_hess(p, &x, t) else {
                return Err(Error::Solver("iterate left the interior".into()));
            };
            let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
            let Some(dx) = solve_spd(&h, &neg_g, nv) else {
                return Err(Error::Solver("singular Newton system".into()));
            };
            let decrement: f64 = -g.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>();
            if decrement / 2.0 <= 1e-10 {
                break;
            }
            let f0 = barrier_value(p, &x, t).expect("current iterate is interior");
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-12 {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + step * d).collect();
                if let Some(f1) = barrier_value(p, &trial, t) {
                    if f1 <= f0 - 0.25 * step * decrement {
                        x = trial;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if let Some(stop) = early_stop {
                if stop(&x) {
                    return Ok(PathResult {
                        x,
                        t,
                        outer,
                        converged: true,
                        trace,
                    });
                }
            }
            if !moved {
                // Rounding floor reached for this centering problem.
                break;
            }
        }
        if opts.record_trace {
            trace.push(TraceRecord {
                iteration: outer,
                mu: 1.0 / t,
                objective: p.objective_at(&x),
                min_eig: p.min_eig_at(&x)?,
            });
        }
        if m / t < opts.gap_tol {
            return Ok(PathResult {
                x,
                t,
                outer: outer + 1,
                converged: true,
                trace,
            });
        }
        t /= opts.mu_factor;
    }
    Ok(PathResult {
        x,
        t,
        outer: opts.max_iter,
        converged: false,
        trace,
    })
}

/// Phase I: finds a strictly feasible point by minimizing `s` over `F(x) + sI ⪰ 0`, `s ≥ −1`,
/// inside a box around `x0`. Returns `Ok(None)` when the optimal `s` is certified nonnegative,
/// i.e. the LMI has no strictly feasible point within the box.
fn phase_one(p: &LmiProblem, x0: &[f64], opts: &SdpOptions) -> Result<Option<(Vec<f64>, usize)>> {
    let nv = p.nvars;
    let lam = p.min_eig_at(x0)?;
    let s0 = (1.0 - lam).max(0.0);
    let mut blocks: Vec<LmiBlock> = p
        .blocks
        .iter()
        .map(|b| {
            let mut fk = b.fk.clone();
            fk.push(ComplexMatrix::identity(b.size()));
            LmiBlock { f0: b.f0.clone(), fk }
        })
        .collect();
    let mut floor_fk = vec![ComplexMatrix::zeros(1, 1); nv];
    floor_fk.push(ComplexMatrix::identity(1));
    blocks.push(LmiBlock {
        f0: ComplexMatrix::identity(1),
        fk: floor_fk,
    });
    // Box |x_k − x0_k| ≤ R keeps the auxiliary problem bounded in x.
    if nv > 0 {
        let r = PHASE_ONE_BOX * (1.0 + x0.iter().fold(0.0_f64, |a, v| a.max(v.abs())));
        let mut f0 = ComplexMatrix::zeros(2 * nv, 2 * nv);
        let mut fk = Vec::with_capacity(nv + 1);
        for k in 0..nv {
            f0.set(2 * k, 2 * k, C64::new(r - x0[k], 0.0));
            f0.set(2 * k + 1, 2 * k + 1, C64::new(r + x0[k], 0.0));
            let mut e = ComplexMatrix::zeros(2 * nv, 2 * nv);
            e.set(2 * k, 2 * k, C64::new(1.0, 0.0));
            e.set(2 * k + 1, 2 * k + 1, C64::new(-1.0, 0.0));
            fk.push(e);
        }
        fk.push(ComplexMatrix::zeros(2 * nv, 2 * nv));
        blocks.push(LmiBlock { f0, fk });
    }
    let mut c = vec![0.0; nv];
    c.push(1.0);
    let aux = LmiProblem::new(c, blocks)?;
    let mut start = x0.to_vec();
    start.push(s0);
    let stop = |z: &[f64]| z[nv] < -1e-12;
    let res = follow_path(&aux, start, opts, Some(&stop))?;
    if res.x[nv] < -1e-12 {
        let x = res.x[..nv].to_vec();
        if strictly_feasible(p, &x) {
            return Ok(Some((x, res.outer)));
        }
    }
    if !res.converged {
        return Err(Error::IterationLimit(opts.max_iter));
    }
    let lower = res.x[nv] - aux.barrier_degree() / res.t;
    if lower >= 0.0 {
        Ok(None)
    } else {
        Err(Error::Solver(format!(
            "phase I ended on the feasibility boundary (s* = {:.3e})",
            res.x[nv]
        )))
    }
}

/// Minimizes `c·x` over the LMI. An exhausted iteration budget yields status `IterationLimit`.
pub fn solve(p: &LmiProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    let x0 = opts.start.clone().unwrap_or_else(|| vec![0.0; p.nvars]);
    if x0.len() != p.nvars {
        return Err(Error::arg("sdp", "start point has the wrong length"));
    }
    let (x_start, phase1_iters) = if strictly_feasible(p, &x0) {
        (x0, 0)
    } else {
        match phase_one(p, &x0, opts)? {
            Some(found) => found,
            None => {
                return Ok(SdpSolution {
                    status: SdpStatus::InfeasibleCertified,
                    objective: p.objective_at(&x0),
                    min_block_eig: p.min_eig_at(&x0)?,
                    x: x0,
                    iterations: opts.max_iter,
                    gap: f64::NAN,
                    trace: vec![],
                })
            }
        }
    };
    let res = follow_path(p, x_start, opts, None)?;
    let min_block_eig = p.min_eig_at(&res.x)?;
    Ok(SdpSolution {
        status: if res.converged {
            SdpStatus::Optimal
        } else {
            SdpStatus::IterationLimit
        },
        objective: p.objective_at(&res.x),
        min_block_eig,
        gap: p.barrier_degree() / res.t,
        iterations: phase1_iters + res.outer,
        x: res.x,
        trace: res.trace,
    })
}

/// Half-width of the phase-I search box, relative to `1 + ‖x0‖∞`.
const PHASE_ONE_BOX: f64 = 1e3;

/// Feasibility bands for `t*`.
pub const FEASIBLE_TOL: f64 = 1e-6;
pub const INFEASIBLE_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub verdict: Verdict,
    pub t_star: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

impl FeasibilityResult {
    pub fn feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }
}

pub fn verdict_for(t_star: f64) -> Verdict {
    if t_star <= FEASIBLE_TOL {
        Verdict::Feasible
    } else if t_star > INFEASIBLE_TOL {
        Verdict::Infeasible
    } else {
        Verdict::Inconclusive
    }
}

/// Solves `min t` s.t. `F_b(x) + tI ⪰ 0` for all blocks and `t ≥ −1`.
///
/// The floor keeps the problem bounded when the blocks are already strictly feasible,
/// so such problems report `t* = −1`.
pub fn feasibility(p: &LmiProblem, opts: &SdpOptions) -> Result<FeasibilityResult> {
    let nv = p.nvars;
    let mut blocks: Vec<LmiBlock> = p
        .blocks
        .iter()
        .map(|b| {
            let mut fk = b.fk.clone();
            fk.push(ComplexMatrix::identity(b.size()));
            LmiBlock { f0: b.f0.clone(), fk }
        })
        .collect();
    let mut floor = vec![ComplexMatrix::zeros(1, 1); nv];
    floor.push(ComplexMatrix::identity(1));
    blocks.push(LmiBlock {
        f0: ComplexMatrix::identity(1),
        fk: floor,
    });
    let mut c = vec![0.0; nv];
    c.push(1.0);
    let aug = LmiProblem::new(c, blocks)?;
    let mut x0 = opts.start.clone().unwrap_or_else(|| vec![0.0; nv]);
    if x0.len() != nv {
        return Err(Error::arg("sdp", "start point has the wrong length"));
    }
    let lam = p.min_eig_at(&x0)?;
    x0.push((1.0 - lam).max(0.0));
    let inner = SdpOptions {
        start: Some(x0),
        ..opts.clone()
    };
    let sol = solve(&aug, &inner)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::IterationLimit(sol.iterations));
    }
    let t_star = sol.x[nv];
    Ok(FeasibilityResult {
        verdict: verdict_for(t_star),
        t_star,
        x: sol.x[..nv].to_vec(),
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, rows, v).unwrap()
    }

    #[test]
    fn hpd_inverse_matches_identity() {
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(0.5, 0.3)],
            vec![C64::new(0.5, -0.3), C64::new(1.0, 0.0)],
        ])
        .unwrap();
        let (inv, logdet) = hpd_inverse(&a).unwrap();
        let prod = a.matmul(&inv).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        assert!((logdet - (2.0 - 0.34f64).ln()).abs() < 1e-14);
    }

    #[test]
    fn phase_one_finds_interior() {
        // x ≥ 2 from x0 = 0 needs phase I.
        let p = LmiProblem::new(
            vec![1.0],
            vec![LmiBlock {
                f0: real(1, &[-2.0]),
                fk: vec![real(1, &[1.0])],
            }],
        )
        .unwrap();
        let s = solve(&p, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.objective - 2.0).abs() < 1e-8, "{s:?}");
    }

    #[test]
    fn phase_one_certifies_infeasible() {
        // x ≥ 1 and −x ≥ 1 cannot both hold.
        let p = LmiProblem::new(
            vec![0.0],
            vec![LmiBlock {
                f0: real(2, &[-1.0, 0.0, 0.0, -1.0]),
                fk: vec![real(2, &[1.0, 0.0, 0.0, -1.0])],
            }],
        )
        .unwrap();
        let s = solve(&p, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::InfeasibleCertified);
    }
}
