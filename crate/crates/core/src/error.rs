use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("eigenvalue {value:.3e} is below the negative tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("operator {index} has norm {norm:.6} exceeding the bound {bound:.6}")]
    NormExceeded { index: usize, norm: f64, bound: f64 },

    #[error("tuple is not commuting normal (commutator {commutator:.3e}, normality {normality:.3e})")]
    NotCommutingNormal { commutator: f64, normality: f64 },

    #[error("operators do not pairwise anticommute (residual {residual:.3e})")]
    NotAnticommuting { residual: f64 },

    #[error("infeasible scales: {0}")]
    InfeasibleScales(String),

    #[error("premise violated: {0}")]
    Premise(String),

    #[error("invalid convex body: {0}")]
    InvalidBody(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("point lies outside the linear hull of the body")]
    OutsideHull,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("eigendecomposition did not converge")]
    EigenFailure,
}
