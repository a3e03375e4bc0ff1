//! Toolkit for pairs of orthogonal projections on finite-dimensional
//! complex inner-product spaces.
//!
//! Given two orthogonal projections P and Q, the crate computes the adapted
//! orthonormal basis that reduces the pair to four scalar blocks plus a sum
//! of 2x2 fibers parameterized by the compression H of Q to the generic
//! part of im P, and answers the derived questions fiberwise: kernels,
//! spectra, norms, Moore-Penrose and Drazin inverses, compatible-range
//! verdicts, Fredholm index, trace identities, the symmetry distance, and
//! intertwining unitaries. Every formula path is backed by an independent
//! brute-force oracle working on raw matrices.

pub mod algebra;
pub mod canonical;
pub mod numerics;
pub mod oracle;
pub mod pairs;

pub use numerics::{C64, CMatrix, SubspaceBasis, Tolerances};
