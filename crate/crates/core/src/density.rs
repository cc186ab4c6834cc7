//! Validated quantum states built on [`ComplexMatrix`].

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::{
    self, inner, kron, kron_vec, vec_norm, ComplexMatrix, C64, PSD_CLAMP,
};

const HERMITIAN_EPS: f64 = 1e-12;
const TRACE_EPS: f64 = 1e-12;
const NORM_EPS: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite operator with explicit subsystem dims.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, mat: ComplexMatrix) -> Result<Self> {
        let d: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || !mat.is_square() || mat.rows() != d {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for dims {:?}",
                mat.rows(),
                mat.cols(),
                dims
            )));
        }
        let herr = mat.hermiticity_error();
        if herr > HERMITIAN_EPS {
            return Err(Error::NotHermitian(herr));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_EPS || tr.im.abs() > TRACE_EPS {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        if !tensor::is_psd(&mat, PSD_CLAMP) {
            return Err(Error::Indefinite(tensor::min_eigenvalue(&mat)?));
        }
        Ok(Self { dims, mat })
    }

    /// Skips validation; callers guarantee the invariants up to rounding.
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, mat: ComplexMatrix) -> Self {
        Self {
            dims,
            mat: mat.hermitian_part(),
        }
    }

    /// `I/d` on the given dims.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self::from_parts_unchecked(dims, ComplexMatrix::identity(d).scale_re(1.0 / d as f64))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr(ρ·O)`, real part; `O` is expected Hermitian.
    pub fn expect(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(self.mat.trace_product(op)?.re)
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).map(|z| z.re).unwrap_or(0.0)
    }

    pub fn eig(&self) -> Result<tensor::HermitianEig> {
        tensor::hermitian_eig(&self.mat)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = tensor::partial_trace_op(&self.mat, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        let dims = k.iter().map(|&i| self.dims[i]).collect();
        Ok(Self::from_parts_unchecked(dims, m))
    }

    pub fn partial_transpose(&self, part: usize) -> Result<ComplexMatrix> {
        tensor::partial_transpose_op(&self.mat, &self.dims, part)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts_unchecked(dims, kron(&self.mat, &other.mat))
    }

    /// `U ρ U†` for a unitary of matching size.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || !u.is_square() {
            return Err(Error::Dimension(format!(
                "{}x{} unitary on dimension {}",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        Ok(Self::from_parts_unchecked(
            self.dims.clone(),
            self.mat.conjugate_by(u)?,
        ))
    }

    /// Convex combination `Σ p_k ρ_k`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::arg("state", "empty mixture"))?;
        let dims = first.1.dims.clone();
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::arg("state", format!("weights must be a distribution (sum {total})")));
        }
        let mut acc = ComplexMatrix::zeros(first.1.dim(), first.1.dim());
        for (p, r) in parts {
            if r.dims != dims {
                return Err(Error::Dimension("mixture components differ in dims".into()));
            }
            acc = acc.try_add(&r.mat.scale_re(*p))?;
        }
        Ok(Self::from_parts_unchecked(dims, acc))
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dims: Vec<usize>,
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityRepr {
            dims: self.dims.clone(),
            rows: self.mat.rows(),
            cols: self.mat.cols(),
            re: self.mat.data().iter().map(|z| z.re).collect(),
            im: self.mat.data().iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DensityRepr::deserialize(d)?;
        if r.re.len() != r.im.len() {
            return Err(D::Error::custom("re and im lengths differ"));
        }
        let data = r.re.iter().zip(&r.im).map(|(&a, &b)| C64::new(a, b)).collect();
        let mat = ComplexMatrix::new(r.rows, r.cols, data).map_err(D::Error::custom)?;
        DensityMatrix::new(r.dims, mat).map_err(D::Error::custom)
    }
}

/// Normalized state vector with explicit subsystem dims.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amp: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct PureRepr {
    dims: Vec<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PureRepr {
            dims: self.dims.clone(),
            re: self.amp.iter().map(|z| z.re).collect(),
            im: self.amp.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PureRepr::deserialize(d)?;
        if r.re.len() != r.im.len() {
            return Err(D::Error::custom("re and im lengths differ"));
        }
        let amp = r.re.iter().zip(&r.im).map(|(&a, &b)| C64::new(a, b)).collect();
        PureState::new(r.dims, amp).map_err(D::Error::custom)
    }
}

impl PureState {
    pub fn new(dims: Vec<usize>, amp: Vec<C64>) -> Result<Self> {
        Self::check_dims(&dims, amp.len())?;
        let n = vec_norm(&amp);
        if (n * n - 1.0).abs() > NORM_EPS {
            return Err(Error::InvalidState(format!("squared norm {} is not 1", n * n)));
        }
        Ok(Self { dims, amp })
    }

    /// Rescales `amp` to unit norm; errors on the zero vector.
    pub fn normalized(dims: Vec<usize>, mut amp: Vec<C64>) -> Result<Self> {
        Self::check_dims(&dims, amp.len())?;
        let n = vec_norm(&amp);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        for z in amp.iter_mut() {
            *z /= n;
        }
        Ok(Self { dims, amp })
    }

    /// Normalizes real amplitudes.
    pub fn from_real(dims: Vec<usize>, amp: &[f64]) -> Result<Self> {
        Self::normalized(dims, amp.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis state labelled by per-subsystem digits.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(a, d)| a >= d) {
            return Err(Error::arg("state", format!("basis label {digits:?} for dims {dims:?}")));
        }
        let d: usize = dims.iter().product();
        let mut amp = vec![C64::new(0.0, 0.0); d];
        amp[tensor::undigits(digits, &dims)] = C64::new(1.0, 0.0);
        Ok(Self { dims, amp })
    }

    fn check_dims(dims: &[usize], len: usize) -> Result<()> {
        let d: usize = dims.iter().product();
        if dims.is_empty() || d != len {
            return Err(Error::Dimension(format!(
                "{len} amplitudes for dims {dims:?}"
            )));
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(
            self.dims.clone(),
            ComplexMatrix::outer(&self.amp, &self.amp),
        )
    }

    /// `⟨ψ|O|ψ⟩`, real part.
    pub fn expect(&self, op: &ComplexMatrix) -> Result<f64> {
        let v = op.apply(&self.amp)?;
        Ok(inner(&self.amp, &v).re)
    }

    pub fn overlap(&self, other: &PureState) -> C64 {
        inner(&self.amp, &other.amp)
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState {
            dims,
            amp: kron_vec(&self.amp, &other.amp),
        }
    }

    /// `U|ψ⟩`, renormalized against rounding drift.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<PureState> {
        Self::normalized(self.dims.clone(), u.apply(&self.amp)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unit_trace() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(vec![2], m),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn rejects_indefinite() {
        let m = ComplexMatrix::diag_real(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(vec![2], m),
            Err(Error::Indefinite(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let psi = PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let rho = psi.to_density();
        let s = serde_json::to_string(&rho).unwrap();
        assert!(s.contains("\"dims\":[2,2]"));
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }
}
