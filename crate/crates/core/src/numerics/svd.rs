//! Singular value decomposition by one-sided Jacobi column rotations.
//!
//! One-sided Jacobi keeps full relative accuracy on small singular values,
//! which the null-space extraction downstream depends on.

use num_complex::Complex64 as C64;

use super::eig::rotation;
use super::subspace::SubspaceBasis;
use super::{CMatrix, NumericsError, Tolerances};

const MAX_SWEEPS: usize = 64;

/// Full decomposition M = U · diag(σ) · V* with U (rows x rows) and
/// V (cols x cols) unitary and σ descending of length min(rows, cols).
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }

    /// Singular value of column `j` of V, treating the tail of a wide
    /// matrix as zeros.
    pub fn sigma_at(&self, j: usize) -> f64 {
        self.sigma.get(j).copied().unwrap_or(0.0)
    }
}

pub fn svd(m: &CMatrix, tol: &Tolerances) -> Result<Svd, NumericsError> {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint(), tol)?;
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }

    let rows = m.rows();
    let cols = m.cols();
    let mut w: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = 1e-15;
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols.saturating_sub(1) {
            for j in i + 1..cols {
                let alpha = col_norm_sqr(&w[i]);
                let beta = col_norm_sqr(&w[j]);
                let gamma = col_inner(&w[i], &w[j]);
                let gn = gamma.norm();
                if gn <= 1e-150 || gn * gn <= eps * eps * alpha * beta {
                    continue;
                }
                rotated = true;
                let r = rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let wi = w[i][k];
                    let wj = w[j][k];
                    w[i][k] = wi * r.r00 + wj * r.r10;
                    w[j][k] = wi * r.r01 + wj * r.r11;
                }
                for k in 0..cols {
                    let vi = v[i][k];
                    let vj = v[j][k];
                    v[i][k] = vi * r.r00 + vj * r.r10;
                    v[j][k] = vi * r.r01 + vj * r.r11;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = w.iter().map(|c| col_norm_sqr(c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let sigma_max = sigma[0];

    // Left singular vectors: normalized images where the singular value is
    // trustworthy, orthonormal completion for the numerically-zero tail.
    let u_cut = sigma_max * (rows.max(cols) as f64) * 1e-14;
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(rows);
    for &idx in &order {
        if norms[idx] > u_cut && norms[idx] > 0.0 {
            let inv = 1.0 / norms[idx];
            u_cols.push(w[idx].iter().map(|z| z * inv).collect());
        }
    }
    complete_orthonormal(&mut u_cols, rows);

    let v_cols: Vec<Vec<C64>> = order.iter().map(|&i| v[i].clone()).collect();

    let u = CMatrix::from_columns(&u_cols);
    let v = CMatrix::from_columns(&v_cols);
    debug_assert!(u.rows() == rows && u.cols() == rows);
    debug_assert!(v.rows() == cols && v.cols() == cols);
    let _ = tol;
    Ok(Svd { u, sigma, v })
}

/// Largest singular value (the operator 2-norm).
pub fn operator_norm_2(m: &CMatrix, tol: &Tolerances) -> Result<f64, NumericsError> {
    Ok(svd(m, tol)?.sigma_max())
}

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular value is at most `cutoff * sigma_max` (absolute `cutoff`
/// when the matrix is zero).
pub fn null_basis(m: &CMatrix, cutoff: f64, tol: &Tolerances) -> Result<SubspaceBasis, NumericsError> {
    assert!(cutoff > 0.0, "null space cutoff must be positive");
    let f = svd(m, tol)?;
    let sigma_max = f.sigma_max();
    let threshold = if sigma_max > 0.0 { cutoff * sigma_max } else { cutoff };
    let mut cols = Vec::new();
    for j in 0..m.cols() {
        if f.sigma_at(j) <= threshold {
            cols.push(f.v.column(j));
        }
    }
    SubspaceBasis::new(m.cols(), cols, tol)
}

fn col_norm_sqr(c: &[C64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

fn col_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Extends `cols` (orthonormal) to `dim` vectors, picking the standard
/// basis vector with the largest residual at every step. Deterministic.
pub(super) fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, dim: usize) {
    if cols.len() >= dim {
        return;
    }
    // Residuals of the standard basis against the accepted columns.
    let mut residuals: Vec<Vec<C64>> = (0..dim)
        .map(|i| {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[i] = C64::new(1.0, 0.0);
            for c in cols.iter() {
                let overlap = col_inner(c, &e);
                for (ek, ck) in e.iter_mut().zip(c) {
                    *ek -= overlap * ck;
                }
            }
            e
        })
        .collect();
    while cols.len() < dim {
        let (best, best_norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, col_norm_sqr(r)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("non-empty residual set");
        assert!(best_norm > 1e-20, "orthonormal completion degenerated");
        let mut v = residuals.swap_remove(best);
        // Re-orthogonalize for stability before accepting.
        for _ in 0..2 {
            for c in cols.iter() {
                let overlap = col_inner(c, &v);
                for (vk, ck) in v.iter_mut().zip(c) {
                    *vk -= overlap * ck;
                }
            }
        }
        let inv = 1.0 / col_norm_sqr(&v).sqrt();
        for z in v.iter_mut() {
            *z *= inv;
        }
        for r in residuals.iter_mut() {
            let overlap = col_inner(&v, r);
            for (rk, vk) in r.iter_mut().zip(&v) {
                *rk -= overlap * vk;
            }
        }
        cols.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn reconstruct(f: &Svd, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |i, j| {
            (0..f.sigma.len())
                .map(|k| f.u[(i, k)] * f.sigma[k] * f.v[(j, k)].conj())
                .sum()
        })
    }

    #[test]
    fn trivial_cases() {
        // diag[3, 0] → σ = (3, 0)
        let m = CMatrix::from_real(2, 2, &[3.0, 0.0, 0.0, 0.0]);
        let f = svd(&m, &tols()).unwrap();
        assert!((f.sigma[0] - 3.0).abs() < 1e-14);
        assert!(f.sigma[1].abs() < 1e-14);

        // nilpotent shift → σ = (1, 0)
        let m = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let f = svd(&m, &tols()).unwrap();
        assert!((f.sigma[0] - 1.0).abs() < 1e-14);
        assert!(f.sigma[1].abs() < 1e-14);
        assert!((&reconstruct(&f, 2, 2) - &m).max_abs() < 1e-14);
    }

    #[test]
    fn unitary_input_has_unit_singular_values() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_real(2, 2, &[s, s, s, -s]);
        let f = svd(&m, &tols()).unwrap();
        assert!(f.sigma.iter().all(|&x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn random_and_rank_deficient_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(r, c, rank) in &[(48usize, 48usize, 48usize), (64, 40, 40), (40, 64, 12), (50, 50, 7)] {
            let m = if rank >= r.min(c) {
                CMatrix::from_fn(r, c, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            } else {
                let a = CMatrix::from_fn(r, rank, |_, _| {
                    C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                });
                let b = CMatrix::from_fn(rank, c, |_, _| {
                    C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                });
                &a * &b
            };
            let f = svd(&m, &tols()).unwrap();
            let err = (&reconstruct(&f, r, c) - &m).max_abs();
            assert!(err <= 1e-9 * (1.0 + m.max_abs()), "({r},{c},{rank}) err={err:.3e}");
            assert!(f.u.unitary_residual() < 1e-10, "({r},{c},{rank}) U");
            assert!(f.v.unitary_residual() < 1e-10, "({r},{c},{rank}) V");
            assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
            assert!(f.sigma.iter().all(|&s| s >= 0.0));

            // Singular values agree with the square roots of the Gram
            // spectrum.
            let gram = &m.adjoint() * &m;
            let (gram_eig, _) = crate::numerics::hermitian_eig(&gram, &tols()).unwrap();
            let mut from_gram: Vec<f64> =
                gram_eig.iter().map(|&v| v.max(0.0).sqrt()).collect();
            from_gram.reverse();
            // Relative to σ_max: the Gram route itself loses half the
            // digits at the zero singular values.
            let scale = 1.0 + f.sigma_max();
            for (s, g) in f.sigma.iter().zip(&from_gram) {
                assert!((s - g).abs() <= 1e-8 * scale, "({r},{c},{rank}) σ");
            }
        }
    }

    #[test]
    fn null_basis_trivial_cases() {
        let z = CMatrix::zeros(2, 2);
        let t = tols();
        assert_eq!(null_basis(&z, t.null_space, &t).unwrap().dim(), 2);
        assert_eq!(null_basis(&CMatrix::identity(2), t.null_space, &t).unwrap().dim(), 0);
        let d = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let nb = null_basis(&d, t.null_space, &t).unwrap();
        assert_eq!(nb.dim(), 1);
        assert!(nb.columns()[0][0].norm() < 1e-12);
        assert!((nb.columns()[0][1].norm() - 1.0).abs() < 1e-12);
    }
}
