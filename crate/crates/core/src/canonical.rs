//! Validation of projection pairs, the canonical decomposition, its
//! inverse (reconstruction), and seeded ground-truth pair synthesis.
//!
//! The decomposition is computed through the supersymmetric pair
//! A = P − Q, B = I − P − Q, which satisfies A² + B² = I and AB + BA = 0.
//! The eigenspaces of A at ±1 give the mixed intersection subspaces, the
//! kernel of A splits under B into the two commuting blocks, and the rest
//! reduces to a balanced two-block form whose polar data produce the
//! compression H of Q to the generic part of im P.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numerics::{
    hermitian_eig, null_basis, polar_unitary_part, psd_sqrt, random_unitary, CMatrix,
    NumericsError, SubspaceBasis, Tolerances,
};

#[derive(Debug, Error)]
pub enum CanonicalError {
    #[error("matrices have different sizes: {left}x{left} vs {right}x{right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("{which} is not square")]
    NotSquareInput { which: &'static str },
    #[error("{which} is not Hermitian (residual {residual:.3e})")]
    NotHermitian { which: &'static str, residual: f64 },
    #[error("{which} is not idempotent (residual {residual:.3e})")]
    NotIdempotent { which: &'static str, residual: f64 },
    #[error("inputs do not form a projection pair: {0}")]
    NotAPair(String),
    #[error("tolerance violation in {stage}: residual {residual:.3e} exceeds {bound:.3e}")]
    ToleranceViolation {
        stage: &'static str,
        residual: f64,
        bound: f64,
    },
    #[error("invalid pair specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A validated pair of orthogonal projections of equal size.
#[derive(Debug, Clone)]
pub struct ProjectionPair {
    p: CMatrix,
    q: CMatrix,
}

impl ProjectionPair {
    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    /// A = P − Q.
    pub fn difference(&self) -> CMatrix {
        &self.p - &self.q
    }

    /// B = I − P − Q.
    pub fn supersym_partner(&self) -> CMatrix {
        &(&CMatrix::identity(self.dim()) - &self.p) - &self.q
    }
}

/// Checks squareness, size agreement, Hermitian-ness and idempotency.
pub fn validate_pair(
    p: &CMatrix,
    q: &CMatrix,
    tol: &Tolerances,
) -> Result<ProjectionPair, CanonicalError> {
    for (which, m) in [("P", p), ("Q", q)] {
        if !m.is_square() {
            return Err(CanonicalError::NotSquareInput { which });
        }
    }
    if p.rows() != q.rows() {
        return Err(CanonicalError::SizeMismatch {
            left: p.rows(),
            right: q.rows(),
        });
    }
    for (which, m) in [("P", p), ("Q", q)] {
        let herm = m.hermitian_residual();
        if herm > tol.hermitian {
            return Err(CanonicalError::NotHermitian {
                which,
                residual: herm,
            });
        }
        let idem = (&(m * m) - m).max_abs();
        if idem > tol.idempotent {
            return Err(CanonicalError::NotIdempotent {
                which,
                residual: idem,
            });
        }
    }
    Ok(ProjectionPair {
        p: p.clone(),
        q: q.clone(),
    })
}

/// Index of one of the four intersection subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MSubspace {
    /// im P ∩ im Q
    M00,
    /// im P ∩ Ker Q
    M01,
    /// Ker P ∩ im Q
    M10,
    /// Ker P ∩ Ker Q
    M11,
}

/// One of the four intersection subspaces, extracted as the null space of
/// a PSD sum (the null space of a sum of PSD operators is the intersection
/// of their null spaces).
pub fn subspace_m(
    pair: &ProjectionPair,
    which: MSubspace,
    tol: &Tolerances,
) -> Result<SubspaceBasis, CanonicalError> {
    let id = CMatrix::identity(pair.dim());
    let (p, q) = (pair.p(), pair.q());
    let sum = match which {
        MSubspace::M00 => &(&id - p) + &(&id - q),
        MSubspace::M01 => &(&id - p) + q,
        MSubspace::M10 => p + &(&id - q),
        MSubspace::M11 => p + q,
    };
    Ok(null_basis(&sum, tol.gap, tol)?)
}

/// Subspace dimensions of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub d00: usize,
    pub d01: usize,
    pub d10: usize,
    pub d11: usize,
    pub m: usize,
}

impl Dims {
    pub fn total(&self) -> usize {
        self.d00 + self.d01 + self.d10 + self.d11 + 2 * self.m
    }
}

/// Adapted orthonormal basis plus the spectrum of H.
///
/// The columns of `basis` are ordered M00 | M01 | M10 | M11 | M | M',
/// with the eigenvectors of H folded into the two generic blocks, so in
/// this basis P is diagonal with pattern (1,1,0,0 | 1…1 | 0…0) and Q is
/// diagonal on the four scalar blocks with a scalar 2x2 fiber
/// [[λ, √(λ(1−λ))],[√(λ(1−λ)), 1−λ]] over every pair (Mⱼ, M'ⱼ).
///
/// Phase convention: each column of the four scalar blocks has its first
/// component above threshold made real positive; each M column is phase
/// normalized the same way and its partner M' column carries the same
/// phase factor, which keeps the fiber off-diagonal on the positive real
/// axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HalmosDecomposition {
    basis: CMatrix,
    dims: Dims,
    h_values: Vec<f64>,
}

impl HalmosDecomposition {
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn h_values(&self) -> &[f64] {
        &self.h_values
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Column offset of the generic M block inside the basis.
    pub fn m_block_start(&self) -> usize {
        self.dims.d00 + self.dims.d01 + self.dims.d10 + self.dims.d11
    }

    /// Column offset of the M' block.
    pub fn m_prime_block_start(&self) -> usize {
        self.m_block_start() + self.dims.m
    }

    /// Column of the adapted basis spanning fiber `j` inside M.
    pub fn m_column(&self, j: usize) -> Vec<C64> {
        self.basis.column(self.m_block_start() + j)
    }

    /// Column of the adapted basis spanning fiber `j` inside M'.
    pub fn m_prime_column(&self, j: usize) -> Vec<C64> {
        self.basis.column(self.m_prime_block_start() + j)
    }
}

/// Prescription for synthesizing a ground-truth pair.
#[derive(Debug, Clone)]
pub struct RandomPairSpec {
    pub d00: usize,
    pub d01: usize,
    pub d10: usize,
    pub d11: usize,
    pub h_values: Vec<f64>,
    pub seed: u64,
}

impl RandomPairSpec {
    pub fn dims(&self) -> Dims {
        Dims {
            d00: self.d00,
            d01: self.d01,
            d10: self.d10,
            d11: self.d11,
            m: self.h_values.len(),
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<(), CanonicalError> {
        if self.dims().total() == 0 {
            return Err(CanonicalError::InvalidSpec(
                "total dimension must be positive".into(),
            ));
        }
        for &h in &self.h_values {
            if !(h.is_finite() && h > tol.gap && h < 1.0 - tol.gap) {
                return Err(CanonicalError::InvalidSpec(format!(
                    "h value {h} outside the open interval (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Builds the pair of projections determined by a decomposition:
/// P = T·diag(blocks)·T* and likewise Q with the canonical 2x2 fibers.
pub fn reconstruct(dec: &HalmosDecomposition) -> ProjectionPair {
    let (p_block, q_block) = canonical_blocks(&dec.dims, &dec.h_values);
    let t = &dec.basis;
    let p = (&(t * &p_block) * &t.adjoint()).hermitized();
    let q = (&(t * &q_block) * &t.adjoint()).hermitized();
    ProjectionPair { p, q }
}

/// Block-diagonal canonical matrices of P and Q for given dims and
/// h-values (the decomposition with identity basis).
pub fn canonical_blocks(dims: &Dims, h_values: &[f64]) -> (CMatrix, CMatrix) {
    assert_eq!(dims.m, h_values.len());
    let n = dims.total();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    let mut at = 0usize;
    for i in 0..dims.d00 {
        p[(at + i, at + i)] = one;
        q[(at + i, at + i)] = one;
    }
    at += dims.d00;
    for i in 0..dims.d01 {
        p[(at + i, at + i)] = one;
    }
    at += dims.d01;
    for i in 0..dims.d10 {
        q[(at + i, at + i)] = one;
    }
    at += dims.d10 + dims.d11;
    let m_start = at;
    let mp_start = at + dims.m;
    for (j, &h) in h_values.iter().enumerate() {
        let s = (h * (1.0 - h)).sqrt();
        p[(m_start + j, m_start + j)] = one;
        q[(m_start + j, m_start + j)] = C64::new(h, 0.0);
        q[(m_start + j, mp_start + j)] = C64::new(s, 0.0);
        q[(mp_start + j, m_start + j)] = C64::new(s, 0.0);
        q[(mp_start + j, mp_start + j)] = C64::new(1.0 - h, 0.0);
    }
    (p, q)
}

/// Synthesizes a pair with prescribed dimensions and H-spectrum by
/// conjugating the canonical form with a seeded Haar-like unitary.
/// Returns the pair together with its ground-truth decomposition.
pub fn generate_pair(
    spec: &RandomPairSpec,
    tol: &Tolerances,
) -> Result<(ProjectionPair, HalmosDecomposition), CanonicalError> {
    spec.validate(tol)?;
    let mut h_values = spec.h_values.clone();
    h_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dims = spec.dims();
    let n = dims.total();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let u = random_unitary(n, &mut rng);
    let dec = HalmosDecomposition {
        basis: u,
        dims,
        h_values,
    };
    let pair = reconstruct(&dec);
    Ok((pair, dec))
}

/// Computes the canonical decomposition of a validated pair.
pub fn halmos_decompose(
    pair: &ProjectionPair,
    tol: &Tolerances,
) -> Result<HalmosDecomposition, CanonicalError> {
    let n = pair.dim();
    let nf = n as f64;
    let a = pair.difference().hermitized();
    let b = pair.supersym_partner().hermitized();

    // Supersymmetry identities; failure means the inputs are not a pair.
    let id = CMatrix::identity(n);
    let ss1 = (&(&(&a * &a) + &(&b * &b)) - &id).max_abs();
    let ss2 = (&(&a * &b) + &(&b * &a)).max_abs();
    let ss_bound = tol.supersym * nf;
    if ss1 > ss_bound || ss2 > ss_bound {
        return Err(CanonicalError::NotAPair(format!(
            "supersymmetry residuals {ss1:.3e}, {ss2:.3e} exceed {ss_bound:.3e}"
        )));
    }

    // Classify the spectrum of A into {−1, 0, +1} clusters and the
    // generic signed parts.
    let (a_values, a_vectors) = hermitian_eig(&a, tol)?;
    let mut cols_m01 = Vec::new();
    let mut cols_m10 = Vec::new();
    let mut cols_ker = Vec::new();
    let mut cols_pos: Vec<(f64, Vec<C64>)> = Vec::new();
    let mut cols_neg: Vec<(f64, Vec<C64>)> = Vec::new();
    for (i, &lambda) in a_values.iter().enumerate() {
        let col = a_vectors.column(i);
        let dist = (lambda - 1.0)
            .abs()
            .min((lambda + 1.0).abs())
            .min(lambda.abs());
        if dist > tol.gap && dist < tol.cluster_guard {
            return Err(CanonicalError::ToleranceViolation {
                stage: "difference-spectrum clustering",
                residual: dist,
                bound: tol.gap,
            });
        }
        if (lambda - 1.0).abs() <= tol.gap {
            cols_m01.push(col);
        } else if (lambda + 1.0).abs() <= tol.gap {
            cols_m10.push(col);
        } else if lambda.abs() <= tol.gap {
            cols_ker.push(col);
        } else if lambda > 0.0 {
            cols_pos.push((lambda, col));
        } else {
            cols_neg.push((lambda, col));
        }
    }
    if cols_pos.len() != cols_neg.len() {
        return Err(CanonicalError::ToleranceViolation {
            stage: "signed spectrum pairing",
            residual: (cols_pos.len() as f64 - cols_neg.len() as f64).abs(),
            bound: 0.0,
        });
    }
    let m = cols_pos.len();

    // Split Ker A by the sign of the involution B: on im P ∩ im Q the
    // partner acts as −I, on Ker P ∩ Ker Q as +I.
    let mut cols_m00 = Vec::new();
    let mut cols_m11 = Vec::new();
    if !cols_ker.is_empty() {
        let k = CMatrix::from_columns(&cols_ker);
        let b00 = (&(&k.adjoint() * &b) * &k).hermitized();
        let (b_values, b_vectors) = hermitian_eig(&b00, tol)?;
        for (i, &mu) in b_values.iter().enumerate() {
            if (mu.abs() - 1.0).abs() > tol.cluster_guard {
                return Err(CanonicalError::ToleranceViolation {
                    stage: "kernel involution split",
                    residual: (mu.abs() - 1.0).abs(),
                    bound: tol.cluster_guard,
                });
            }
            let combined = mat_vec_cols(&cols_ker, &b_vectors.column(i));
            if mu < 0.0 {
                cols_m00.push(combined);
            } else {
                cols_m11.push(combined);
            }
        }
        // Keep deterministic intra-block order: B-eigenvalues ascend, so
        // both groups already come out in a fixed order.
    }

    let dims = Dims {
        d00: cols_m00.len(),
        d01: cols_m01.len(),
        d10: cols_m10.len(),
        d11: cols_m11.len(),
        m,
    };
    debug_assert_eq!(dims.total(), n);

    let (cols_m, cols_mp, h_values) = if m == 0 {
        (Vec::new(), Vec::new(), Vec::new())
    } else {
        generic_blocks(&a, &b, &cols_pos, &cols_neg, tol)?
    };

    // Assemble the adapted basis with the documented phase convention.
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for block in [&cols_m00, &cols_m01, &cols_m10, &cols_m11] {
        for col in block.iter() {
            columns.push(phase_normalized(col.clone(), None));
        }
    }
    for (mc, mpc) in cols_m.iter().zip(cols_mp.iter()) {
        let phase = leading_phase(mc);
        columns.push(phase_normalized(mc.clone(), Some(phase)));
        columns.push(Vec::new()); // placeholder, filled below
        let idx = columns.len() - 1;
        columns[idx] = phase_normalized(mpc.clone(), Some(phase));
    }
    // Reorder interleaved generic columns into M block then M' block.
    if m > 0 {
        let scalar = dims.d00 + dims.d01 + dims.d10 + dims.d11;
        let tail = columns.split_off(scalar);
        let mut ms = Vec::with_capacity(m);
        let mut mps = Vec::with_capacity(m);
        for (i, col) in tail.into_iter().enumerate() {
            if i % 2 == 0 {
                ms.push(col);
            } else {
                mps.push(col);
            }
        }
        columns.extend(ms);
        columns.extend(mps);
    }

    let basis = CMatrix::from_columns(&columns);
    let unit_res = basis.unitary_residual();
    if unit_res > tol.factorization * nf {
        return Err(CanonicalError::ToleranceViolation {
            stage: "adapted basis unitarity",
            residual: unit_res,
            bound: tol.factorization * nf,
        });
    }
    for &h in &h_values {
        if !(h >= tol.gap && h <= 1.0 - tol.gap) {
            return Err(CanonicalError::ToleranceViolation {
                stage: "H spectrum interval",
                residual: h.min(1.0 - h),
                bound: tol.gap,
            });
        }
    }

    let dec = HalmosDecomposition {
        basis,
        dims,
        h_values,
    };

    // Round-trip safety net: the decomposition must reproduce the pair.
    let rec = reconstruct(&dec);
    let err = (rec.p() - pair.p())
        .max_abs()
        .max((rec.q() - pair.q()).max_abs());
    if err > tol.reconstruction * nf {
        return Err(CanonicalError::ToleranceViolation {
            stage: "reconstruction round trip",
            residual: err,
            bound: tol.reconstruction * nf,
        });
    }
    Ok(dec)
}

/// Reduction of the generic part: polar data of the off-diagonal block of
/// B over the signed eigenspaces of A.
///
/// Returns the M columns, the M' columns and the eigenvalues of H, all
/// ordered by H-eigenvalue ascending.
fn generic_blocks(
    a: &CMatrix,
    b: &CMatrix,
    cols_pos: &[(f64, Vec<C64>)],
    cols_neg: &[(f64, Vec<C64>)],
    tol: &Tolerances,
) -> Result<(Vec<Vec<C64>>, Vec<Vec<C64>>, Vec<f64>), CanonicalError> {
    let m = cols_pos.len();
    let y_pos = CMatrix::from_columns(&cols_pos.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    let y_neg = CMatrix::from_columns(&cols_neg.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    let n = y_pos.rows();
    let nf = n as f64;
    let assert_bound = tol.decompose * nf;

    // Vanishing blocks of B in the (kernel ⊕ pos ⊕ neg) ordering; these
    // are consequences of the supersymmetry relations, so failures signal
    // inconsistent input.
    let b11 = &(&y_pos.adjoint() * b) * &y_pos;
    let b22 = &(&y_neg.adjoint() * b) * &y_neg;
    for (stage, block) in [("B11 vanishing", &b11), ("B22 vanishing", &b22)] {
        let residual = block.max_abs();
        if residual > 10.0 * assert_bound {
            return Err(CanonicalError::ToleranceViolation {
                stage,
                residual,
                bound: 10.0 * assert_bound,
            });
        }
    }

    let b12 = &(&y_pos.adjoint() * b) * &y_neg;

    // H = B12·B12* (the square of the cosine part); diagonalize once and
    // derive every function of H from the same eigenbasis.
    let x = (&b12 * &b12.adjoint()).hermitized();
    let (h_values, w) = hermitian_eig(&x, tol)?;

    // Polar unitary factor of B12 = C·V; folding V* into the negative
    // block aligns the two signed parts.
    let v = polar_unitary_part(&b12, tol).map_err(|e| match e {
        NumericsError::SingularInput { ratio } => CanonicalError::ToleranceViolation {
            stage: "polar factor of the coupling block",
            residual: ratio,
            bound: 1e-10,
        },
        other => CanonicalError::Numerics(other),
    })?;

    // Consistency: both signed parts of A must equal S = sqrt(I − H).
    let s_mat = psd_sqrt(&(&CMatrix::identity(m) - &x).hermitized(), tol)?;
    let a_pos = &(&y_pos.adjoint() * a) * &y_pos;
    let a_neg = (&(&y_neg.adjoint() * a) * &y_neg).scale_re(-1.0);
    let res_pos = (&a_pos - &s_mat).max_abs();
    let res_neg = (&(&(&v * &a_neg) * &v.adjoint()) - &s_mat).max_abs();
    for (stage, residual) in [
        ("A+ equals sqrt(I−H)", res_pos),
        ("conjugated A− equals sqrt(I−H)", res_neg),
    ] {
        if residual > 10.0 * assert_bound {
            return Err(CanonicalError::ToleranceViolation {
                stage,
                residual,
                bound: 10.0 * assert_bound,
            });
        }
    }

    // Final involution, diagonalized fiberwise: with c = √h, s = √(1−h),
    // the M column is α·(pos eigvec) + β·(neg eigvec) and the M' column
    // β·(pos) − α·(neg), where α = √((1+s)/2), β = −c/√(2(1+s)).
    let y_neg_folded = &y_neg * &v.adjoint();
    let pos_w = &y_pos * &w;
    let neg_w = &y_neg_folded * &w;
    let mut cols_m = Vec::with_capacity(m);
    let mut cols_mp = Vec::with_capacity(m);
    for j in 0..m {
        let h = h_values[j].clamp(0.0, 1.0);
        let c = h.sqrt();
        let s = (1.0 - h).sqrt();
        let alpha = ((1.0 + s) / 2.0).sqrt();
        let beta = -c / (2.0 * (1.0 + s)).sqrt();
        let pcol = pos_w.column(j);
        let ncol = neg_w.column(j);
        let mcol: Vec<C64> = pcol
            .iter()
            .zip(&ncol)
            .map(|(p, nn)| p * alpha + nn * beta)
            .collect();
        let mpcol: Vec<C64> = pcol
            .iter()
            .zip(&ncol)
            .map(|(p, nn)| p * beta - nn * alpha)
            .collect();
        cols_m.push(mcol);
        cols_mp.push(mpcol);
    }
    Ok((cols_m, cols_mp, h_values))
}

/// Phase of the first component with modulus above threshold.
fn leading_phase(col: &[C64]) -> C64 {
    for z in col {
        if z.norm() > 1e-8 {
            return z.conj() / z.norm();
        }
    }
    C64::new(1.0, 0.0)
}

fn phase_normalized(mut col: Vec<C64>, phase: Option<C64>) -> Vec<C64> {
    let ph = phase.unwrap_or_else(|| leading_phase(&col));
    for z in col.iter_mut() {
        *z *= ph;
    }
    col
}

/// Linear combination of columns with the given coefficient vector.
fn mat_vec_cols(cols: &[Vec<C64>], coeffs: &[C64]) -> Vec<C64> {
    let n = cols[0].len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (c, &w) in cols.iter().zip(coeffs) {
        for (o, &v) in out.iter_mut().zip(c) {
            *o += v * w;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    /// The rank-one 2x2 projection with diagonal (x, 1−x).
    pub(crate) fn q2(x: f64) -> CMatrix {
        let s = (x * (1.0 - x)).sqrt();
        CMatrix::from_real(2, 2, &[x, s, s, 1.0 - x])
    }

    #[test]
    fn validate_accepts_commuting_diagonals() {
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let q = CMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        assert!(validate_pair(&p, &q, &t()).is_ok());
    }

    #[test]
    fn validate_rejects_non_hermitian() {
        let p = CMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let q = CMatrix::identity(2);
        assert!(matches!(
            validate_pair(&p, &q, &t()),
            Err(CanonicalError::NotHermitian { which: "P", .. })
        ));
    }

    #[test]
    fn validate_rejects_non_idempotent() {
        let p = CMatrix::from_real(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        let q = CMatrix::identity(2);
        assert!(matches!(
            validate_pair(&p, &q, &t()),
            Err(CanonicalError::NotIdempotent { which: "P", .. })
        ));
    }

    #[test]
    fn validate_rejects_size_mismatch() {
        let p = CMatrix::identity(2);
        let q = CMatrix::identity(3);
        assert!(matches!(
            validate_pair(&p, &q, &t()),
            Err(CanonicalError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn validate_accepts_generic_fixture() {
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(validate_pair(&p, &q2(0.25), &t()).is_ok());
    }

    #[test]
    fn subspaces_of_identity_pair() {
        let p = CMatrix::identity(2);
        let pair = validate_pair(&p, &p, &t()).unwrap();
        assert_eq!(subspace_m(&pair, MSubspace::M00, &t()).unwrap().dim(), 2);
        assert_eq!(subspace_m(&pair, MSubspace::M01, &t()).unwrap().dim(), 0);
    }

    #[test]
    fn subspaces_of_commuting_pair() {
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let q = CMatrix::zeros(2, 2);
        let pair = validate_pair(&p, &q, &t()).unwrap();
        assert_eq!(subspace_m(&pair, MSubspace::M01, &t()).unwrap().dim(), 1);
        assert_eq!(subspace_m(&pair, MSubspace::M11, &t()).unwrap().dim(), 1);
        assert_eq!(subspace_m(&pair, MSubspace::M00, &t()).unwrap().dim(), 0);
        assert_eq!(subspace_m(&pair, MSubspace::M10, &t()).unwrap().dim(), 0);
        let m01 = subspace_m(&pair, MSubspace::M01, &t()).unwrap();
        assert!((m01.columns()[0][0].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn subspaces_of_generic_pair_are_trivial() {
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let pair = validate_pair(&p, &q2(0.25), &t()).unwrap();
        for w in [MSubspace::M00, MSubspace::M01, MSubspace::M10, MSubspace::M11] {
            assert_eq!(subspace_m(&pair, w, &t()).unwrap().dim(), 0);
        }
    }

    #[test]
    fn decompose_generic_2x2_fixture() {
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let pair = validate_pair(&p, &q2(0.25), &t()).unwrap();
        let dec = halmos_decompose(&pair, &t()).unwrap();
        assert_eq!(
            dec.dims(),
            Dims { d00: 0, d01: 0, d10: 0, d11: 0, m: 1 }
        );
        assert_eq!(dec.h_values().len(), 1);
        assert!((dec.h_values()[0] - 0.25).abs() < 1e-10, "h = {}", dec.h_values()[0]);
    }

    #[test]
    fn decompose_commuting_pair() {
        let p = CMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let pair = validate_pair(&p, &p, &t()).unwrap();
        let dec = halmos_decompose(&pair, &t()).unwrap();
        assert_eq!(
            dec.dims(),
            Dims { d00: 2, d01: 0, d10: 0, d11: 1, m: 0 }
        );
    }

    #[test]
    fn reconstruct_trivial_dims() {
        let dec = HalmosDecomposition {
            basis: CMatrix::identity(1),
            dims: Dims { d00: 1, d01: 0, d10: 0, d11: 0, m: 0 },
            h_values: vec![],
        };
        let pair = reconstruct(&dec);
        assert!((pair.p() - &CMatrix::identity(1)).max_abs() < 1e-15);
        assert!((pair.q() - &CMatrix::identity(1)).max_abs() < 1e-15);
    }

    #[test]
    fn reconstruct_single_fiber_half() {
        let dec = HalmosDecomposition {
            basis: CMatrix::identity(2),
            dims: Dims { d00: 0, d01: 0, d10: 0, d11: 0, m: 1 },
            h_values: vec![0.5],
        };
        let pair = reconstruct(&dec);
        let want = CMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!((pair.q() - &want).max_abs() < 1e-15);
    }

    #[test]
    fn round_trip_mixed_spec() {
        let spec = RandomPairSpec {
            d00: 1,
            d01: 1,
            d10: 1,
            d11: 1,
            h_values: vec![0.3, 0.7],
            seed: 42,
        };
        let (pair, truth) = generate_pair(&spec, &t()).unwrap();
        let dec = halmos_decompose(&pair, &t()).unwrap();
        assert_eq!(dec.dims(), truth.dims());
        for (a, b) in dec.h_values().iter().zip(truth.h_values()) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        let rec = reconstruct(&dec);
        assert!((rec.p() - pair.p()).max_abs() < 1e-8);
        assert!((rec.q() - pair.q()).max_abs() < 1e-8);
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = RandomPairSpec {
            d00: 0,
            d01: 1,
            d10: 0,
            d11: 0,
            h_values: vec![0.2, 0.5, 0.9],
            seed: 7,
        };
        let (a, _) = generate_pair(&spec, &t()).unwrap();
        let (b, _) = generate_pair(&spec, &t()).unwrap();
        assert_eq!(a.p().entries(), b.p().entries());
        assert_eq!(a.q().entries(), b.q().entries());
    }

    #[test]
    fn generator_spec_m0() {
        let spec = RandomPairSpec {
            d00: 2,
            d01: 0,
            d10: 0,
            d11: 0,
            h_values: vec![],
            seed: 3,
        };
        let (pair, _) = generate_pair(&spec, &t()).unwrap();
        assert!((pair.p() - pair.q()).max_abs() < 1e-12);
        // rank 2 = trace 2
        assert!((pair.p().trace().re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn generated_difference_spectrum_matches_prescription() {
        let spec = RandomPairSpec {
            d00: 0,
            d01: 0,
            d10: 0,
            d11: 0,
            h_values: vec![0.2, 0.5, 0.9],
            seed: 31,
        };
        let (pair, _) = generate_pair(&spec, &t()).unwrap();
        let (values, _) = hermitian_eig(&pair.difference(), &t()).unwrap();
        let mut expected: Vec<f64> = spec
            .h_values
            .iter()
            .flat_map(|&h| {
                let r = (1.0 - h).sqrt();
                [r, -r]
            })
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in values.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn decompose_rejects_gray_zone_eigenvalues() {
        // An H value of 2.5e-7 puts a difference eigenvalue within
        // (gap, cluster guard) of +1, which must be rejected rather than
        // silently clustered.
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let pair = validate_pair(&p, &q2(2.5e-7), &t()).unwrap();
        assert!(matches!(
            halmos_decompose(&pair, &t()),
            Err(CanonicalError::ToleranceViolation {
                stage: "difference-spectrum clustering",
                ..
            })
        ));
    }

    #[test]
    fn decompose_rejects_h_outside_interval() {
        // h = 1 − 5e-9 survives clustering (the difference eigenvalue
        // ~7e-5 is generic) but violates the open-interval invariant on
        // the spectrum of H.
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let pair = validate_pair(&p, &q2(1.0 - 5e-9), &t()).unwrap();
        assert!(matches!(
            halmos_decompose(&pair, &t()),
            Err(CanonicalError::ToleranceViolation {
                stage: "H spectrum interval",
                ..
            })
        ));
    }

    #[test]
    fn decompose_rejects_non_pair_inputs() {
        // Hermitian idempotent checks pass but supersymmetry cannot fail for
        // genuine projections, so feed halmos_decompose a corrupted pair.
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let pair = ProjectionPair {
            p: p.clone(),
            q: CMatrix::from_real(2, 2, &[0.5, 0.1, 0.1, 0.4]),
        };
        assert!(matches!(
            halmos_decompose(&pair, &t()),
            Err(CanonicalError::NotAPair(_))
        ));
    }
}
