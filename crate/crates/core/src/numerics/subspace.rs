//! Orthonormal bases of subspaces, containment and complements.

use num_complex::Complex64 as C64;

use super::svd::{complete_orthonormal, svd};
use super::{CMatrix, NumericsError, Tolerances};

/// Orthonormal basis of a subspace of ℂ^ambient. May be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ambient: usize,
    columns: Vec<Vec<C64>>,
}

impl SubspaceBasis {
    /// Validates orthonormality to `tol.orthonormal` before accepting.
    pub fn new(
        ambient: usize,
        columns: Vec<Vec<C64>>,
        tol: &Tolerances,
    ) -> Result<Self, NumericsError> {
        assert!(ambient > 0);
        assert!(columns.iter().all(|c| c.len() == ambient));
        let mut residual = 0.0f64;
        for (i, a) in columns.iter().enumerate() {
            for (j, b) in columns.iter().enumerate() {
                let g: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((g - want).norm());
            }
        }
        if residual > tol.orthonormal {
            return Err(NumericsError::NotOrthonormal {
                residual,
                tol: tol.orthonormal,
            });
        }
        Ok(Self { ambient, columns })
    }

    pub fn empty(ambient: usize) -> Self {
        assert!(ambient > 0);
        Self {
            ambient,
            columns: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let columns = (0..ambient)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); ambient];
                e[j] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        Self { ambient, columns }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<C64>] {
        &self.columns
    }

    /// Basis vectors as an ambient x dim matrix; None when empty.
    pub fn matrix(&self) -> Option<CMatrix> {
        if self.columns.is_empty() {
            None
        } else {
            Some(CMatrix::from_columns(&self.columns))
        }
    }

    /// Orthogonal projector onto the subspace (ambient x ambient).
    pub fn projector(&self) -> CMatrix {
        match self.matrix() {
            None => CMatrix::zeros(self.ambient, self.ambient),
            Some(b) => (&b * &b.adjoint()).hermitized(),
        }
    }

    /// Residual of the best approximation of `v` inside the subspace.
    pub fn distance_from(&self, v: &[C64]) -> f64 {
        assert_eq!(v.len(), self.ambient);
        let mut res: Vec<C64> = v.to_vec();
        for c in &self.columns {
            let overlap: C64 = c.iter().zip(res.iter()).map(|(x, y)| x.conj() * y).sum();
            for (r, ck) in res.iter_mut().zip(c) {
                *r -= overlap * ck;
            }
        }
        res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest principal angle (radians) between two subspaces of equal
    /// dimension, from the singular values of B₁* B₂.
    pub fn max_principal_angle(
        &self,
        other: &SubspaceBasis,
        tol: &Tolerances,
    ) -> Result<f64, NumericsError> {
        if self.ambient != other.ambient {
            return Err(NumericsError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        if self.dim() != other.dim() {
            return Ok(std::f64::consts::FRAC_PI_2);
        }
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let b1 = self.matrix().unwrap();
        let b2 = other.matrix().unwrap();
        let overlap = &b1.adjoint() * &b2;
        let f = svd(&overlap, tol)?;
        let c = f.sigma_min().clamp(0.0, 1.0);
        Ok(c.acos())
    }
}

/// Deterministic orthonormalization of arbitrary vectors: largest-residual
/// pivoting, vectors below `drop_tol` discarded.
pub fn orthonormal_columns(vectors: &[Vec<C64>], drop_tol: f64) -> Vec<Vec<C64>> {
    let mut residuals: Vec<Vec<C64>> = vectors.to_vec();
    let mut out: Vec<Vec<C64>> = Vec::new();
    loop {
        let mut best = usize::MAX;
        let mut best_norm = drop_tol;
        for (i, r) in residuals.iter().enumerate() {
            let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > best_norm {
                best = i;
                best_norm = n;
            }
        }
        if best == usize::MAX {
            break;
        }
        let mut v = residuals.swap_remove(best);
        // Re-orthogonalize against accepted columns for stability.
        for _ in 0..2 {
            for c in &out {
                let overlap: C64 = c.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                for (vk, ck) in v.iter_mut().zip(c) {
                    *vk -= overlap * ck;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n <= drop_tol {
            continue;
        }
        let inv = 1.0 / n;
        for z in v.iter_mut() {
            *z *= inv;
        }
        for r in residuals.iter_mut() {
            let overlap: C64 = v.iter().zip(r.iter()).map(|(x, y)| x.conj() * y).sum();
            for (rk, vk) in r.iter_mut().zip(&v) {
                *rk -= overlap * vk;
            }
        }
        out.push(v);
    }
    out
}

/// Orthonormal basis of `container ⊖ sub`.
///
/// Fails with `NotContained` when `sub` is not inside `container` to
/// `tol.containment`, or when the numerical complement does not have the
/// dimension `dim container − dim sub`.
pub fn complement_within(
    sub: &SubspaceBasis,
    container: &SubspaceBasis,
    tol: &Tolerances,
) -> Result<SubspaceBasis, NumericsError> {
    if sub.ambient() != container.ambient() {
        return Err(NumericsError::AmbientMismatch {
            left: sub.ambient(),
            right: container.ambient(),
        });
    }
    let mut worst = 0.0f64;
    for c in sub.columns() {
        worst = worst.max(container.distance_from(c));
    }
    if worst > tol.containment {
        return Err(NumericsError::NotContained { residual: worst });
    }
    if sub.dim() > container.dim() {
        return Err(NumericsError::NotContained { residual: worst.max(1.0) });
    }

    let expected = container.dim() - sub.dim();
    if expected == 0 {
        return Ok(SubspaceBasis::empty(container.ambient()));
    }
    // Project container vectors onto the orthocomplement of sub, then
    // orthonormalize what survives.
    let projected: Vec<Vec<C64>> = container
        .columns()
        .iter()
        .map(|col| {
            let mut v = col.clone();
            for s in sub.columns() {
                let overlap: C64 = s.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                for (vk, sk) in v.iter_mut().zip(s) {
                    *vk -= overlap * sk;
                }
            }
            v
        })
        .collect();
    let cols = orthonormal_columns(&projected, 1e-8);
    if cols.len() != expected {
        return Err(NumericsError::NotContained { residual: worst });
    }
    SubspaceBasis::new(container.ambient(), cols, tol)
}

/// Orthonormal basis of the orthogonal complement of the span of `basis`.
pub fn orthogonal_complement(basis: &SubspaceBasis) -> SubspaceBasis {
    let mut cols = basis.columns().to_vec();
    complete_orthonormal(&mut cols, basis.ambient());
    let columns = cols.split_off(basis.dim());
    SubspaceBasis {
        ambient: basis.ambient(),
        columns,
    }
}
