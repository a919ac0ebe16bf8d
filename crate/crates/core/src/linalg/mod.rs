//! Dense complex matrix kernels.
//!
//! Everything downstream (Jordan chains, canonical bases, overlap kernels) is
//! built on the small set of routines here: products, partial-pivot LU,
//! one-sided Jacobi SVD, Hermitian Jacobi eigensolver and a Hessenberg/QR
//! eigenvalue solver. All tolerances are relative to the scale of the input.

mod eigen;
mod hermitian;
mod lu;
mod matrix;
mod svd;

pub use eigen::{eigenvalues, sort_lexicographic};
pub use hermitian::{hermitian_eigen, HermitianEigen};
pub use lu::{determinant, inverse, Lu};
pub use matrix::{multiply, AntisymmetricMatrix, ComplexMatrix};
pub use svd::{condition_number, svd, svd_rank, Svd};

pub use num_complex::Complex64;

/// Default relative tolerance for the antisymmetry check.
pub const DEFAULT_ANTISYM_TOL: f64 = 1e-12;
/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {op} got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entries length {len} does not match {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not antisymmetric: max |A + A^T| = {deviation:e} exceeds {bound:e}")]
    NotAntisymmetric { deviation: f64, bound: f64 },
    #[error("matrix is singular to tolerance (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },
    #[error("QR iteration failed to converge for eigenvalue index {index}")]
    NoConvergence { index: usize },
}

#[cfg(test)]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
