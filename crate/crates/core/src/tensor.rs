//! Dense complex linear algebra for small multipartite operators.
//!
//! Storage is row-major. Subsystem index 0 is the most significant digit of a
//! basis label, so `|ab⟩` on dims `[da, db]` has linear index `a * db + b`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop, relative to max(1, ‖A‖_F).
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in [−PSD_CLAMP, 0) are treated as zero.
pub const PSD_CLAMP: f64 = 1e-9;
/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Dimension("non-finite entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real entries in row-major order.
    pub fn from_real(rows: usize, cols: usize, re: &[f64]) -> Result<Self> {
        Self::new(rows, cols, re.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Builds a square matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = C64::new(x, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] += z;
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `A − A†`.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut e: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                e = e.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        e
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * p..(k + 1) * p];
                let dst = &mut out[i * p..(i + 1) * p];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: p,
            data: out,
        })
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::Dimension("trace of non-square product".into()));
        }
        let mut s = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                s += self.data[i * self.cols + k] * other.data[k * other.cols + i];
            }
        }
        Ok(s)
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    /// Hermitian part `(A + A†)/2`; used to remove rounding asymmetry.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    /// Panics on shape mismatch; use [`ComplexMatrix::try_add`] for fallible addition.
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix shapes must agree")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix shapes must agree")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("inner dimensions must agree")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixRepr {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.re.len() != r.im.len() {
            return Err(Error::Dimension("re and im lengths differ".into()));
        }
        let data = r
            .re
            .iter()
            .zip(&r.im)
            .map(|(&a, &b)| C64::new(a, b))
            .collect();
        ComplexMatrix::new(r.rows, r.cols, data)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        ComplexMatrix::try_from(r).map_err(serde::de::Error::custom)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a.get(i, j);
            if x == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, x * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Mixed-radix digits of `idx` over `dims`, most significant first.
pub(crate) fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut d = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        d[k] = idx % dims[k];
        idx /= dims[k];
    }
    d
}

pub(crate) fn undigits(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (&x, &n)| acc * n + x)
}

fn check_square_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows != total {
        return Err(Error::Dimension(format!(
            "{}x{} operator does not match dims {:?}",
            m.rows, m.cols, dims
        )));
    }
    Ok(())
}

/// Partial trace of an operator over every subsystem not listed in `keep`.
/// Kept subsystems retain their original order.
pub fn partial_trace_op(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_square_dims(m, dims)?;
    if keep.is_empty() {
        return Err(Error::arg("tensor", "keep set is empty"));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::arg("tensor", format!("invalid keep set {keep:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let kdims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kdims.iter().product();
    let dt: usize = tdims.iter().product();
    let mut out = ComplexMatrix::zeros(dk, dk);
    let mut full = vec![0usize; dims.len()];
    let mut full2 = vec![0usize; dims.len()];
    for i in 0..dk {
        let di = digits(i, &kdims);
        for j in 0..dk {
            let dj = digits(j, &kdims);
            let mut s = ZERO;
            for t in 0..dt {
                let dtt = digits(t, &tdims);
                for (pos, &k) in keep_sorted.iter().enumerate() {
                    full[k] = di[pos];
                    full2[k] = dj[pos];
                }
                for (pos, &k) in traced.iter().enumerate() {
                    full[k] = dtt[pos];
                    full2[k] = dtt[pos];
                }
                s += m.get(undigits(&full, dims), undigits(&full2, dims));
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Transpose of the operator on subsystem `part` only.
pub fn partial_transpose_op(m: &ComplexMatrix, dims: &[usize], part: usize) -> Result<ComplexMatrix> {
    check_square_dims(m, dims)?;
    if part >= dims.len() {
        return Err(Error::arg("tensor", format!("subsystem {part} out of range")));
    }
    let n = m.rows;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let mut di = digits(i, dims);
        for j in 0..n {
            let mut dj = digits(j, dims);
            std::mem::swap(&mut di[part], &mut dj[part]);
            let v = m.get(undigits(&di, dims), undigits(&dj, dims));
            std::mem::swap(&mut di[part], &mut dj[part]);
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Realignment `⟨ij|R|kl⟩ = ⟨ik|ρ|jl⟩` of a bipartite operator on `da ⊗ db`.
/// The result is `da² × db²`.
pub fn realign(m: &ComplexMatrix, da: usize, db: usize) -> Result<ComplexMatrix> {
    check_square_dims(m, &[da, db])?;
    let mut out = ComplexMatrix::zeros(da * da, db * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out.set(i * da + j, k * db + l, m.get(i * db + k, j * db + l));
                }
            }
        }
    }
    Ok(out)
}

/// Reorders subsystems: output subsystem `k` is input subsystem `perm[k]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    check_square_dims(m, dims)?;
    let mut seen = perm.to_vec();
    seen.sort_unstable();
    if seen != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::arg("tensor", format!("{perm:?} is not a permutation")));
    }
    let ndims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let n = m.rows;
    let map = |idx: usize| {
        let d = digits(idx, &ndims);
        let mut orig = vec![0; dims.len()];
        for (k, &p) in perm.iter().enumerate() {
            orig[p] = d[k];
        }
        undigits(&orig, dims)
    };
    let idx: Vec<usize> = (0..n).map(map).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| m.get(idx[i], idx[j])))
}

/// Cyclic Jacobi eigensolver for a real symmetric `n × n` matrix stored row-major.
/// Returns unsorted eigenvalues and the column-eigenvector matrix.
pub fn jacobi_symmetric(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows).map(|i| self.vectors.get(i, k)).collect()
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * self.vectors.get(j, k).conj() * fv[k])
                .sum()
        })
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    let err = h.hermiticity_error();
    if err > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(err));
    }
    let n = h.rows;
    if n == 0 {
        return Ok(HermitianEig {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    if h.is_real() {
        let a: Vec<f64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                0.5 * (h.get(i, j).re + h.get(j, i).re)
            })
            .collect();
        let (vals, vecs) = jacobi_symmetric(&a, n);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
        let values = order.iter().map(|&k| vals[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, c| C64::new(vecs[i * n + order[c]], 0.0));
        return Ok(HermitianEig { values, vectors });
    }
    // Embed A + iB as [[A, −B], [B, A]]; each eigenvalue appears twice.
    let m = 2 * n;
    let mut e = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = (h.get(i, j) + h.get(j, i).conj()) * 0.5;
            e[i * m + j] = z.re;
            e[(i + n) * m + (j + n)] = z.re;
            e[i * m + (j + n)] = -z.im;
            e[(i + n) * m + j] = z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(&e, m);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
    let scale = vals.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())).max(1.0);
    let cluster_tol = 1e-9 * scale;

    let mut values = Vec::with_capacity(n);
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && vals[order[end]] - vals[order[end - 1]] <= cluster_tol {
            end += 1;
        }
        let want = (end - start) / 2 + (end - start) % 2;
        let mean = (start..end).map(|k| vals[order[k]]).sum::<f64>() / (end - start) as f64;
        let mut basis: Vec<Vec<C64>> = Vec::new();
        let mut cands: Vec<Vec<C64>> = (start..end)
            .map(|k| {
                let c = order[k];
                (0..n)
                    .map(|i| C64::new(vecs[i * m + c], vecs[(i + n) * m + c]))
                    .collect()
            })
            .collect();
        // Greedy Gram–Schmidt: repeatedly take the candidate with the largest residual.
        while basis.len() < want && !cands.is_empty() {
            let mut best = 0;
            let mut best_norm = -1.0;
            for (idx, c) in cands.iter_mut().enumerate() {
                for b in &basis {
                    let proj: C64 = b.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
                    for (ci, bi) in c.iter_mut().zip(b) {
                        *ci -= proj * bi;
                    }
                }
                let nr = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if nr > best_norm {
                    best_norm = nr;
                    best = idx;
                }
            }
            let mut v = cands.swap_remove(best);
            if best_norm < 1e-8 {
                break;
            }
            for z in v.iter_mut() {
                *z /= best_norm;
            }
            basis.push(v);
        }
        for b in basis {
            values.push(mean);
            columns.push(b);
        }
        start = end;
    }
    if columns.len() != n {
        return Err(Error::Solver(format!(
            "eigenvector pairing recovered {} of {} vectors",
            columns.len(),
            n
        )));
    }
    let vectors = ComplexMatrix::from_fn(n, n, |i, c| columns[c][i]);
    Ok(HermitianEig { values, vectors })
}

pub fn eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(h)?.values)
}

pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(h)?.min())
}

/// Singular values in descending order.
///
/// Computed from the Hermitian dilation `[[0, A], [A†, 0]]`, whose spectrum is `±σ`.
/// This keeps small singular values accurate to machine precision, unlike `sqrt(eig(A†A))`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = (a.rows, a.cols);
    let k = r.min(c);
    if k == 0 {
        return vec![];
    }
    let n = r + c;
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..r {
        for j in 0..c {
            let z = a.get(i, j);
            d.set(i, r + j, z);
            d.set(r + j, i, z.conj());
        }
    }
    let mut vals = eigenvalues(&d).expect("dilation is Hermitian by construction");
    vals.reverse();
    vals.truncate(k);
    vals.into_iter().map(|x| x.max(0.0)).collect()
}

/// Sum of singular values. Hermitian inputs use `Σ|λ|` directly.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    if a.is_square() && a.hermiticity_error() <= 1e-12 * a.frobenius_norm().max(1.0) {
        if let Ok(v) = eigenvalues(a) {
            return v.iter().map(|x| x.abs()).sum();
        }
    }
    singular_values(a).iter().sum()
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(a)?;
    if e.min() < -PSD_CLAMP {
        return Err(Error::Indefinite(e.min()));
    }
    Ok(e.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Cholesky factorisation of a Hermitian matrix; `None` unless strictly positive definite.
pub fn cholesky(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.rows;
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l.set(j, j, C64::new(djj, 0.0));
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / djj);
        }
    }
    Some(l)
}

/// True when every eigenvalue of the Hermitian matrix is at least `−tol`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> bool {
    let n = a.rows;
    let shifted = ComplexMatrix::from_fn(n, n, |i, j| {
        let z = a.get(i, j);
        if i == j {
            z + C64::new(tol, 0.0)
        } else {
            z
        }
    });
    cholesky(&shifted).is_some()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn jacobi_diagonalises_tridiagonal() {
        let a = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        let (mut vals, _) = jacobi_symmetric(&a, 3);
        vals.sort_by(f64::total_cmp);
        let s2 = 2f64.sqrt();
        let want = [2.0 - s2, 2.0, 2.0 + s2];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_degenerate_pairs_are_recovered() {
        // Hermitian with a doubly degenerate eigenvalue and complex entries.
        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0), ZERO],
            vec![c(0.0, -1.0), c(1.0, 0.0), ZERO],
            vec![ZERO, ZERO, c(2.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eig(&h).unwrap();
        assert!((e.values[0] - 0.0).abs() < 1e-12);
        assert!((e.values[1] - 2.0).abs() < 1e-12);
        assert!((e.values[2] - 2.0).abs() < 1e-12);
        let rec = e.reconstruct_with(|x| x);
        assert!(rec.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn digits_round_trip() {
        let dims = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(undigits(&digits(i, &dims), &dims), i);
        }
    }
}
