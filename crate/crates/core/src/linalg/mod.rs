//! Dense complex linear algebra: matrices, tuples, isometries and the
//! residual calculus the constructions are checked with.

pub mod eigen;
pub mod matrix;
pub mod real;
pub mod tuple;

pub use eigen::{hermitian_eigen, lambda_max, op_norm, psd_sqrt, HermitianEigen};
pub use matrix::{pauli, ComplexMatrix, C64};
pub use tuple::{Isometry, MatrixTuple};

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;

/// Numerical tolerances shared by every routine, plus the seed for the
/// randomized ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Threshold for rank and eigenspace decisions.
    pub eig_tol: f64,
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { abs_tol: 1e-9, rel_tol: 1e-9, eig_tol: 1e-7, seed: 0 }
    }
}

impl ToleranceConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, eig_tol: f64, seed: u64) -> Result<Self> {
        let cfg = ToleranceConfig { abs_tol, rel_tol, eig_tol, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol), ("eig_tol", self.eig_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Sets `abs_tol` and `rel_tol` together.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `abs_tol + rel_tol·norm`.
    pub fn scaled(&self, norm: f64) -> f64 {
        self.abs_tol + self.rel_tol * norm
    }
}

/// Standard Kronecker product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// `(V*N₁V, ..., V*N_dV)`.
pub fn compress(v: &Isometry, n: &MatrixTuple) -> Result<MatrixTuple> {
    let parts: Vec<ComplexMatrix> =
        n.iter().map(|m| v.compress_matrix(m)).collect::<Result<_>>()?;
    MatrixTuple::new(parts)
}

/// Largest `‖V*N_iV - X_i‖_F` over the tuple.
pub fn compression_residual(v: &Isometry, n: &MatrixTuple, x: &MatrixTuple) -> Result<f64> {
    if n.d() != x.d() || v.small_dim() != x.dim() {
        return Err(Error::Shape(format!(
            "compression of a {}-tuple to a {}-tuple of size {}",
            n.d(),
            x.d(),
            x.dim()
        )));
    }
    let c = compress(v, n)?;
    Ok(c.iter().zip(x.iter()).map(|(a, b)| (a - b).frobenius()).fold(0.0, f64::max))
}
