use super::eigen::op_norm;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;

/// Relative tolerance used to detect Hermitian members on construction.
const HERMITIAN_DETECT_TOL: f64 = 1e-12;

/// An ordered list of `d ≥ 1` square matrices of a common size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    matrices: Vec<ComplexMatrix>,
    hermitian: Vec<bool>,
}

impl MatrixTuple {
    /// Builds a tuple, detecting which members are Hermitian.
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let hermitian = matrices.iter().map(|m| m.is_hermitian(HERMITIAN_DETECT_TOL)).collect();
        Self::validated(matrices, hermitian)
    }

    /// Builds a tuple with caller-supplied Hermitian flags; a `true` flag is
    /// checked against `‖M - M*‖ ≤ tol·‖M‖`.
    pub fn with_flags(matrices: Vec<ComplexMatrix>, flags: Vec<bool>, tol: f64) -> Result<Self> {
        if flags.len() != matrices.len() {
            return Err(Error::Shape(format!(
                "{} Hermitian flags for {} matrices",
                flags.len(),
                matrices.len()
            )));
        }
        for (m, &flag) in matrices.iter().zip(&flags) {
            if flag && !m.is_hermitian(tol) {
                return Err(Error::NotHermitian { residual: m.hermitian_residual() });
            }
        }
        Self::validated(matrices, flags)
    }

    fn validated(matrices: Vec<ComplexMatrix>, hermitian: Vec<bool>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::Shape("a tuple needs at least one matrix".into()))?;
        let n = first.rows();
        for m in &matrices {
            if !m.is_square() {
                return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
            }
            if m.rows() != n {
                return Err(Error::Shape(format!("tuple members of sizes {n} and {}", m.rows())));
            }
            if !m.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(MatrixTuple { matrices, hermitian })
    }

    /// Tuple of `1×1` real scalars.
    pub fn scalars(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| ComplexMatrix::scalar(C64::new(x, 0.0))).collect())
    }

    /// Diagonal tuple whose `k`-th joint eigenvalue is `points[k]`.
    pub fn diagonal(points: &[Vec<f64>]) -> Result<Self> {
        let d = points.first().map_or(0, |p| p.len());
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::Shape("joint eigenvalues of different lengths".into()));
        }
        Self::new(
            (0..d)
                .map(|j| {
                    let diag: Vec<f64> = points.iter().map(|p| p[j]).collect();
                    ComplexMatrix::from_real_diag(&diag)
                })
                .collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn get(&self, i: usize) -> &ComplexMatrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<ComplexMatrix> {
        self.matrices
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ComplexMatrix> {
        self.matrices.iter()
    }

    pub fn hermitian_flags(&self) -> &[bool] {
        &self.hermitian
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian.iter().all(|&h| h)
    }

    /// Self-adjoint coordinates of the tuple: the members themselves when all
    /// are Hermitian, otherwise `(Re T₁, Im T₁, Re T₂, Im T₂, ...)`.
    pub fn real_parts(&self) -> Vec<ComplexMatrix> {
        if self.is_hermitian() {
            self.matrices.clone()
        } else {
            self.matrices.iter().flat_map(|m| [m.hermitian_part(), m.skew_part()]).collect()
        }
    }

    pub fn map(&self, f: impl Fn(usize, &ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        Self::new(self.matrices.iter().enumerate().map(|(i, m)| f(i, m)).collect())
    }

    /// Conjoined tuple `(T^[1], ..., T^[k])` of tuples acting on one space.
    pub fn conjoin(groups: &[MatrixTuple]) -> Result<Self> {
        Self::new(groups.iter().flat_map(|g| g.matrices.iter().cloned()).collect())
    }

    /// Splits a conjoined tuple back into groups of the given sizes.
    pub fn split(&self, sizes: &[usize]) -> Result<Vec<MatrixTuple>> {
        if sizes.iter().sum::<usize>() != self.d() || sizes.contains(&0) {
            return Err(Error::Shape(format!("group sizes {sizes:?} for a {}-tuple", self.d())));
        }
        let mut out = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            out.push(Self::new(self.matrices[start..start + s].to_vec())?);
            start += s;
        }
        Ok(out)
    }

    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<Self> {
        if self.d() != other.d() {
            return Err(Error::Shape("direct sum of tuples of different lengths".into()));
        }
        Self::new(
            self.matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| ComplexMatrix::block_diag(&[a, b]))
                .collect(),
        )
    }

    pub fn norms(&self) -> Vec<f64> {
        self.matrices.iter().map(op_norm).collect()
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.matrices.iter().map(|m| m.hermitian_residual()).fold(0.0, f64::max)
    }

    pub fn normality_residual(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| m.matmul(&m.adjoint()).commutator_free_residual(&m.adjoint().matmul(m)))
            .fold(0.0, f64::max)
    }

    /// Largest `‖T_i T_j - T_j T_i‖_F` over pairs, together with the adjoint
    /// pairs `‖T_i T_j* - T_j* T_i‖_F`.
    pub fn commutator_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.d() {
            for j in (i + 1)..self.d() {
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                worst = worst.max(a.commutator(b).frobenius());
                if !(self.hermitian[i] && self.hermitian[j]) {
                    worst = worst.max(a.commutator(&b.adjoint()).frobenius());
                }
            }
        }
        worst
    }

    pub fn anticommutator_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.d() {
            for j in (i + 1)..self.d() {
                worst = worst.max(self.matrices[i].anticommutator(&self.matrices[j]).frobenius());
            }
        }
        worst
    }

    pub fn max_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }

    pub fn scale_frobenius(&self) -> f64 {
        self.matrices.iter().map(|m| m.frobenius()).fold(0.0, f64::max)
    }

    /// True when the tuple is commuting and normal within `tol·(1 + scale²)`.
    pub fn is_commuting_normal(&self, tol: f64) -> bool {
        let s = self.scale_frobenius();
        let bound = tol * (1.0 + s * s);
        self.commutator_residual() <= bound && self.normality_residual() <= bound
    }
}

trait Residual {
    fn commutator_free_residual(&self, other: &Self) -> f64;
}

impl Residual for ComplexMatrix {
    fn commutator_free_residual(&self, other: &Self) -> f64 {
        (self - other).frobenius()
    }
}

/// Linear isometry `V: ℂ^small → ℂ^big` with `V*V = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    v: ComplexMatrix,
}

impl Isometry {
    pub fn new(v: ComplexMatrix, tol: f64) -> Result<Self> {
        let iso = Isometry { v };
        let defect = iso.defect();
        if defect > tol {
            return Err(Error::Premise(format!("V*V deviates from I by {defect:.3e}")));
        }
        Ok(iso)
    }

    /// Wraps `V` without checking `V*V = I`. Certificates read from disk use
    /// this; their isometry claim is re-checked on verification.
    pub fn unchecked(v: ComplexMatrix) -> Self {
        Isometry { v }
    }

    /// Embedding of `ℂ^small` onto the first `small` coordinates of `ℂ^big`.
    pub fn leading(big: usize, small: usize) -> Self {
        assert!(small <= big, "leading isometry needs small <= big");
        let mut v = ComplexMatrix::zeros(big, small);
        for i in 0..small {
            v[(i, i)] = C64::new(1.0, 0.0);
        }
        Isometry { v }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn big_dim(&self) -> usize {
        self.v.rows()
    }

    pub fn small_dim(&self) -> usize {
        self.v.cols()
    }

    /// `‖V*V - I‖_F`.
    pub fn defect(&self) -> f64 {
        (&self.v.adjoint_mul(&self.v) - &ComplexMatrix::identity(self.v.cols())).frobenius()
    }

    /// `V* M V`.
    pub fn compress_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.big_dim() || m.cols() != self.big_dim() {
            return Err(Error::Shape(format!(
                "cannot compress a {}x{} matrix with a {}x{} isometry",
                m.rows(),
                m.cols(),
                self.big_dim(),
                self.small_dim()
            )));
        }
        let vt = self.v.adjoint();
        Ok(vt.matmul(&m.matmul(&self.v)))
    }

    /// `V V*`, the projection onto the range.
    pub fn range_projection(&self) -> ComplexMatrix {
        self.v.matmul(&self.v.adjoint())
    }
}
