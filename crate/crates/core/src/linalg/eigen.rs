//! Hermitian spectral calculus. The Hermitian eigendecomposition is the only
//! spectral primitive; normality is always checked, never assumed.

use super::matrix::{ComplexMatrix, C64};
use super::ToleranceConfig;
use crate::error::{Error, Result};
use crate::num;
use alloc::vec::Vec;
use faer::{Mat, Side};

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column_vec(k)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `Σ f(λ_k) v_k v_k*`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        scaled.matmul(&self.vectors.adjoint())
    }
}

/// Eigendecomposition of the Hermitian part of `m`. The caller is
/// responsible for checking that `m` is (close to) Hermitian.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen { values: Vec::new(), vectors: ComplexMatrix::zeros(0, 0) });
    }
    if n == 1 {
        return Ok(HermitianEigen {
            values: alloc::vec![m[(0, 0)].re],
            vectors: ComplexMatrix::identity(1),
        });
    }
    let h = Mat::<C64>::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = h.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
    let values: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure);
    }
    let u = eig.U();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)]);
    Ok(HermitianEigen { values, vectors })
}

pub fn check_hermitian(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let residual = m.hermitian_residual();
    if residual > tol.scaled(m.frobenius()) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_function(
    m: &ComplexMatrix,
    tol: &ToleranceConfig,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    check_hermitian(m, tol)?;
    Ok(hermitian_eigen(m)?.reassemble(f))
}

/// Positive square root of a positive semidefinite matrix. Eigenvalues in
/// `[-eig_tol·max(1, ‖M‖), 0)` are clipped to zero, as are eigenvalues at
/// roundoff level.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    check_hermitian(m, tol)?;
    let eig = hermitian_eigen(m)?;
    let scale = eig.values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let smallest = eig.min();
    if smallest < -tol.eig_tol * scale {
        return Err(Error::NegativeEigenvalue { value: smallest });
    }
    // Eigenvalues at roundoff level are zero; their square roots would be
    // pure noise of size √ε.
    let floor = 64.0 * f64::EPSILON * scale * eig.values.len() as f64;
    Ok(eig.reassemble(|x| if x > floor { num::sqrt(x) } else { 0.0 }))
}

/// Largest eigenvalue of the Hermitian part.
pub fn lambda_max(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m)?.max())
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    if m.is_square() && m.hermitian_residual() <= 1e-15 * m.frobenius() {
        if let Ok(eig) = hermitian_eigen(m) {
            return eig.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        }
    }
    // The Gram matrix of the smaller side; normalize first to avoid overflow.
    let unit = m.scale_real(1.0 / scale);
    let gram = if m.rows() <= m.cols() {
        unit.matmul(&unit.adjoint())
    } else {
        unit.adjoint().matmul(&unit)
    };
    match hermitian_eigen(&gram) {
        Ok(eig) => num::sqrt(eig.max().max(0.0)) * scale,
        Err(_) => m.frobenius(),
    }
}

/// Orthonormal basis (as columns) of the span of the given columns, computed
/// from the Gram matrix spectrum with a relative rank threshold.
pub fn orthonormal_basis(columns: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let n = columns.rows();
    if columns.cols() == 0 {
        return Ok(ComplexMatrix::zeros(n, 0));
    }
    let gram = columns.matmul(&columns.adjoint());
    let eig = hermitian_eigen(&gram)?;
    let top = eig.max().max(0.0);
    let keep: Vec<usize> = (0..n).filter(|&k| eig.values[k] > rank_tol * rank_tol * top.max(1e-300)).collect();
    let mut basis = ComplexMatrix::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        for i in 0..n {
            basis[(i, c)] = eig.vectors[(i, k)];
        }
    }
    Ok(basis)
}

/// Inner product `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `⟨M v, v⟩` for a unit vector `v`, returned as a real number (Hermitian `M`).
pub fn expectation(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let mv = m.mat_vec(v);
    inner(v, &mv).re
}

pub fn vec_norm(v: &[C64]) -> f64 {
    num::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Projection `Σ v_k v_k*` onto the span of orthonormal columns.
pub fn projection_onto(columns: &ComplexMatrix) -> ComplexMatrix {
    if columns.cols() == 0 {
        return ComplexMatrix::zeros(columns.rows(), columns.rows());
    }
    columns.matmul(&columns.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.normal(), rng.normal()));
        a.hermitian_part()
    }

    #[test]
    fn op_norm_examples() {
        let jordan = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!((op_norm(&jordan) - 1.0).abs() < 1e-12);
        assert!((op_norm(&ComplexMatrix::identity(4)) - 1.0).abs() < 1e-12);
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!((op_norm(&ones) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_examples() {
        let tol = ToleranceConfig::default();
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 9.0]), &tol).unwrap();
        assert!((&r - &ComplexMatrix::from_real_diag(&[2.0, 3.0])).max_abs() < 1e-12);

        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = psd_sqrt(&ones, &tol).unwrap();
        let expected = ones.scale_real(1.0 / core::f64::consts::SQRT_2);
        assert!((&r - &expected).max_abs() < 1e-12);

        let z = psd_sqrt(&ComplexMatrix::zeros(3, 3), &tol).unwrap();
        assert!(z.max_abs() < 1e-15);
    }

    #[test]
    fn psd_sqrt_rejects_bad_input() {
        let tol = ToleranceConfig::default();
        let neg = ComplexMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&neg, &tol), Err(Error::NegativeEigenvalue { .. })));
        let skew = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(psd_sqrt(&skew, &tol), Err(Error::NotHermitian { .. })));
        // tiny negative eigenvalues are clipped
        let almost = ComplexMatrix::from_real_diag(&[1.0, -1e-12]);
        assert!(psd_sqrt(&almost, &tol).is_ok());
    }

    #[test]
    fn eigen_residual_random() {
        let mut rng = SeededRng::new(7);
        for n in [2, 5, 17, 40] {
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eigen(&m).unwrap();
            let back = eig.reassemble(|x| x);
            assert!((&back - &m).frobenius() < 1e-11 * (1.0 + m.frobenius()));
            let gram = eig.vectors.adjoint().matmul(&eig.vectors);
            assert!((&gram - &ComplexMatrix::identity(n)).frobenius() < 1e-11);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    // Kronecker-structured matrices have exact zeros and large degenerate
    // eigenspaces; a broken QR stage returns orthonormal but wrong vectors.
    #[test]
    fn eigen_residual_structured() {
        use crate::linalg::matrix::pauli;
        let mut rng = SeededRng::new(11);
        for n in [2, 3, 6] {
            let a = random_hermitian(n, &mut rng);
            let b = random_hermitian(n, &mut rng);
            let m = &pauli::z().kron(&pauli::z()).kron(&a) + &pauli::x().kron(&ComplexMatrix::identity(2)).kron(&b);
            let eig = hermitian_eigen(&m).unwrap();
            let back = eig.reassemble(|x| x);
            assert!((&back - &m).frobenius() < 1e-12 * (1.0 + m.frobenius()));
        }
    }

    #[test]
    fn op_norm_of_rectangular() {
        let v = ComplexMatrix::column(&[C64::new(3.0, 0.0), C64::new(0.0, 4.0)]);
        assert!((op_norm(&v) - 5.0).abs() < 1e-12);
    }
}
