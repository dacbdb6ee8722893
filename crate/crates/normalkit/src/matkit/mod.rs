//! Matrix storage and factorizations.
//!
//! Three storage formats cover everything the solvers need: row-major
//! [`DenseMatrix`] for desk-scale factor work, [`CsrMatrix`] for assembled
//! PDE operators, and [`Tridiagonal`] for the 1D problems.  Factorizations
//! return dedicated factor types that know how to solve with themselves
//! (and with their transpose), which is the shape preconditioners consume.

#[cfg(test)]
pub(crate) mod test_support;

mod banded_lu;
mod cholesky;
mod csr;
mod dense;
mod eig;
mod market;
mod polar;
mod qr;
mod tridiagonal;

pub use banded_lu::BandedLuFactor;
pub use cholesky::CholeskyFactor;
pub use csr::CsrMatrix;
pub use dense::{cholesky_dense, DenseLu, DenseMatrix, DenseTriangular, UpLo};
pub use eig::sym_eig;
pub use market::{read_matrix_market, write_matrix_market};
pub use polar::{polar, PolarFactor};
pub use qr::{qr, qr_tridiagonal, rq, QrFactor, RqFactor, TridiagonalQr};
pub use tridiagonal::{thomas_solve, Tridiagonal};

use thiserror::Error;

/// Errors surfaced by matrix construction, factorization, and I/O.
#[derive(Debug, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (row {i}, col {j}: {a} vs {b})")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("pivot breakdown at index {index}: |pivot| = {pivot:e}")]
    PivotBreakdown { index: usize, pivot: f64 },
    #[error("matrix is not positive definite (pivot {index}: {value:e})")]
    NotSpd { index: usize, value: f64 },
    #[error("rank deficiency detected at diagonal {index}: |r_ii| = {value:e}")]
    RankDeficient { index: usize, value: f64 },
    #[error("iteration did not converge: defect {defect:e} after {iterations} steps")]
    NonConvergence { defect: f64, iterations: usize },
    #[error("invalid matrix data: {0}")]
    Invalid(String),
    #[error("matrix market parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Solve with a factored matrix `P`, both directly and transposed.
///
/// This is the contract preconditioners consume: a normal-equation
/// preconditioner `G = Pᵀ T P` only ever needs `P⁻¹` and `P⁻ᵀ` applies.
pub trait FactorSolve {
    fn nrows(&self) -> usize;
    /// Solve `P x = b`.
    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError>;
    /// Solve `Pᵀ x = b`.
    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError>;
}

pub(crate) mod vecops {
    /// Euclidean inner product.
    pub fn dot(x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Euclidean norm.
    pub fn norm2(x: &[f64]) -> f64 {
        dot(x, x).sqrt()
    }

    /// `y += alpha * x`.
    pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), y.len());
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += alpha * xi;
        }
    }

    pub fn scale(alpha: f64, x: &mut [f64]) {
        for xi in x.iter_mut() {
            *xi *= alpha;
        }
    }
}
