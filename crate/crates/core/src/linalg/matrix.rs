use crate::error::{Error, Result};
use crate::num;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};
use faer::MatRef;
use num_complex::Complex64;

/// Products with at least this many multiply-adds go through a blocked GEMM.
const DENSE_GEMM_WORK: usize = 1 << 18;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(alloc::format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
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
        ComplexMatrix { rows, cols, data }
    }

    /// Real matrix from rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(x, 0.0);
        }
        m
    }

    pub fn scalar(z: C64) -> Self {
        ComplexMatrix { rows: 1, cols: 1, data: vec![z] }
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        ComplexMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// `v v*` for a column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
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

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// `self + s * other`, in place.
    pub fn axpy(&mut self, s: C64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "axpy shape");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product. Zero entries of the left factor are skipped, which
    /// keeps the block-sparse operators produced by the dilations cheap.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let n = rhs.cols;
        let mut out = vec![ZERO; self.rows * n];
        let nnz = rhs.data.iter().filter(|z| z.re != 0.0 || z.im != 0.0).count();
        // Sparse right factors (Kronecker products with Pauli blocks) skip
        // their zero entries too.
        let sparse_rows = if n >= 64 && 10 * nnz < 3 * rhs.data.len() {
            Some(
                (0..rhs.rows)
                    .map(|k| {
                        (0..n)
                            .filter(|&j| {
                                let z = rhs.data[k * n + j];
                                z.re != 0.0 || z.im != 0.0
                            })
                            .map(|j| (j, rhs.data[k * n + j]))
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            )
        } else {
            None
        };
        if sparse_rows.is_none() && self.rows * self.cols * n >= DENSE_GEMM_WORK {
            let lhs_nnz = self.data.iter().filter(|z| z.re != 0.0 || z.im != 0.0).count();
            if 10 * lhs_nnz >= 3 * self.data.len() {
                return self.dense_gemm(rhs);
            }
        }
        for i in 0..self.rows {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                if let Some(rows) = &sparse_rows {
                    for &(j, b) in &rows[k] {
                        out_row[j] += a * b;
                    }
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                if a.im == 0.0 {
                    for (o, b) in out_row.iter_mut().zip(rhs_row) {
                        o.re += a.re * b.re;
                        o.im += a.re * b.im;
                    }
                } else {
                    for (o, b) in out_row.iter_mut().zip(rhs_row) {
                        *o += a * b;
                    }
                }
            }
        }
        ComplexMatrix { rows: self.rows, cols: n, data: out }
    }

    fn dense_gemm(&self, rhs: &Self) -> Self {
        let a = MatRef::from_row_major_slice(&self.data, self.rows, self.cols);
        let b = MatRef::from_row_major_slice(&rhs.data, rhs.rows, rhs.cols);
        let prod = a * b;
        ComplexMatrix::from_fn(self.rows, rhs.cols, |i, j| prod[(i, j)])
    }

    /// `self* rhs`.
    pub fn adjoint_mul(&self, rhs: &Self) -> Self {
        self.adjoint().matmul(rhs)
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mat_vec shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius(&self) -> f64 {
        num::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Frobenius norm of `self - self*`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        num::sqrt(acc)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol * self.frobenius().max(1.0)
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `(M - M*) / 2i`, so that `M = re + i·im` with both parts Hermitian.
    pub fn skew_part(&self) -> Self {
        let half_i = C64::new(0.0, -0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] - self[(j, i)].conj()) * half_i)
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols, "submatrix out of range");
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Self) {
        assert!(
            row0 + block.rows <= self.rows && col0 + block.cols <= self.cols,
            "set_block out of range"
        );
        for i in 0..block.rows {
            let dst = (row0 + i) * self.cols + col0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows, "block2x2 row mismatch");
        assert_eq!(c.rows, d.rows, "block2x2 row mismatch");
        assert_eq!(a.cols, c.cols, "block2x2 column mismatch");
        assert_eq!(b.cols, d.cols, "block2x2 column mismatch");
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack column mismatch");
        let mut data = Vec::new();
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        ComplexMatrix { rows: data.len() / cols.max(1), cols, data }
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i, j] * rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (rhs.rows, rhs.cols);
        let mut m = Self::zeros(self.rows * p, self.cols * q);
        let width = self.cols * q;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..p {
                    let dst = (i * p + k) * width + j * q;
                    for (o, b) in m.data[dst..dst + q].iter_mut().zip(rhs.row(k)) {
                        *o = a * b;
                    }
                }
            }
        }
        m
    }

    /// `diag(self, ..., self)` with `copies` blocks.
    pub fn repeat_diag(&self, copies: usize) -> Self {
        ComplexMatrix::identity(copies).kron(self)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.axpy(ONE, rhs);
    }
}

/// Pauli-type constants used throughout.
pub mod pauli {
    use super::*;

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        })
    }

    /// `Z ⊗ ... ⊗ Z` with `k` factors (`I_1` when `k = 0`).
    pub fn z_power(k: usize) -> ComplexMatrix {
        let mut diag = vec![1.0f64];
        for _ in 0..k {
            let mut next = Vec::with_capacity(diag.len() * 2);
            for &s in &diag {
                next.push(s);
                next.push(-s);
            }
            diag = next;
        }
        ComplexMatrix::from_real_diag(&diag)
    }

    /// Elementary matrix `E_{ij}` of size `n`, zero-based indices.
    pub fn elementary(n: usize, i: usize, j: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }
}
