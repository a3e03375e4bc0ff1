//! Self-contained dense complex linear algebra kernels.
//!
//! Everything downstream (canonical decomposition, symbol calculus,
//! brute-force cross-checks) is built on the operations in this module:
//! Hermitian eigendecomposition, SVD, null spaces, PSD square roots and
//! polar factors. All functions are pure and all values immutable after
//! construction.

mod eig;
mod factor;
mod matrix;
mod random;
mod subspace;
mod svd;
mod tol;

pub use eig::hermitian_eig;
pub use factor::{polar_unitary_part, psd_sqrt};
pub use matrix::{C64, CMatrix};
pub use random::{gaussian, random_unitary};
pub use subspace::{complement_within, orthogonal_complement, orthonormal_columns, SubspaceBasis};
pub use svd::{null_basis, operator_norm_2, svd, Svd};
pub use tol::Tolerances;

use thiserror::Error;

/// Errors raised by the linear algebra kernels.
#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimensions { rows: usize, cols: usize },
    #[error("expected {rows}x{cols} = {} entries, got {got}", rows * cols)]
    EntryCountMismatch { rows: usize, cols: usize, got: usize },
    #[error("matrix contains a NaN or infinite entry")]
    NonFiniteEntry,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {residual:.3e} > {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("iteration failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix has a negative eigenvalue {value:.3e} beyond tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("polar factor of a numerically singular matrix (sigma_min/sigma_max = {ratio:.3e})")]
    SingularInput { ratio: f64 },
    #[error("subspace is not contained in the proposed container (residual {residual:.3e})")]
    NotContained { residual: f64 },
    #[error("columns are not orthonormal (residual {residual:.3e} > {tol:.3e})")]
    NotOrthonormal { residual: f64, tol: f64 },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
}
