//! Explicit dilation constructions for tuples of matrices.
//!
//! The crate is `no_std` (it needs `alloc`). Every construction returns a
//! [`certificate::Certificate`] whose claims can be recomputed from the raw
//! matrices, so callers never have to trust a stored residual.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, tuples, isometries, Hermitian spectra.
//! * [`bodies`]: convex bodies, supports, gauges, products, dilation scale θ.
//! * [`matrix_convex`]: W^max membership, level-one ranges, joint spectra,
//!   Naimark dilations, W^min certificates over simplices.
//! * [`dilation`]: Halmos, the orthogonal Q-family and the product dilations
//!   built on it, and the contraction-to-normal pipeline.
//! * [`anticommuting`]: Clifford generators, anticommuting dilations,
//!   symmetrization and cube-in-ball certificates.
//! * [`pathology`]: joint eigenvector diagnostics, reducing decompositions
//!   and generators for the truncated counterexample tuples.
// `!(x <= b)` is deliberate throughout: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod anticommuting;
pub mod bodies;
pub mod certificate;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod matrix_convex;
pub mod pathology;
pub mod rng;

mod num;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Isometry, MatrixTuple, ToleranceConfig, C64};
