//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex64 as C64;

use super::{CMatrix, NumericsError, Tolerances};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and a unitary matrix of
/// eigenvectors so that `M V = V diag(λ)`. The input must be Hermitian
/// within `tol.hermitian`; it is symmetrized before iterating so the
/// rotations see an exactly Hermitian operand.
pub fn hermitian_eig(
    m: &CMatrix,
    tol: &Tolerances,
) -> Result<(Vec<f64>, CMatrix), NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let residual = m.hermitian_residual();
    let scale = m.max_abs().max(1.0);
    if residual > tol.hermitian * scale {
        return Err(NumericsError::NotHermitian {
            residual,
            tol: tol.hermitian * scale,
        });
    }

    let n = m.rows();
    let mut a = m.hermitized();
    let mut v = CMatrix::identity(n);

    if n == 1 {
        return Ok((vec![a[(0, 0)].re], v));
    }

    let conv = 1e-15 * a.frobenius_norm().max(1e-300);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = a[(p, q)];
                let gn = g.norm();
                off_max = off_max.max(gn);
                if gn <= conv {
                    continue;
                }
                let rot = rotation(a[(p, p)].re, a[(q, q)].re, g);
                apply_rotation(&mut a, &mut v, p, q, &rot);
            }
        }
        if off_max <= conv {
            converged = true;
            break;
        }
    }
    if !converged {
        // One more pass to measure; Jacobi on Hermitian input does not stall
        // in practice, but honor the contract.
        let mut off_max = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off_max = off_max.max(a[(p, q)].norm());
            }
        }
        if off_max > 1e-12 * a.frobenius_norm().max(1e-300) {
            return Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// 2x2 unitary R with R* [[α, γ],[γ̄, β]] R diagonal.
pub(super) struct Rotation {
    pub(super) r00: C64,
    pub(super) r01: C64,
    pub(super) r10: C64,
    pub(super) r11: C64,
}

pub(super) fn rotation(alpha: f64, beta: f64, gamma: C64) -> Rotation {
    let g = gamma.norm();
    let phase = gamma / g; // e^{iφ}
    let tau = (beta - alpha) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // R = diag(1, e^{-iφ}) · [[c, s],[−s, c]]
    let eniphi = phase.conj();
    Rotation {
        r00: C64::new(c, 0.0),
        r01: C64::new(s, 0.0),
        r10: -eniphi * s,
        r11: eniphi * c,
    }
}

fn apply_rotation(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, r: &Rotation) {
    let n = a.rows();
    // A ← A·R on columns p, q.
    for i in 0..n {
        let ap = a[(i, p)];
        let aq = a[(i, q)];
        a[(i, p)] = ap * r.r00 + aq * r.r10;
        a[(i, q)] = ap * r.r01 + aq * r.r11;
    }
    // A ← R*·A on rows p, q.
    for j in 0..n {
        let ap = a[(p, j)];
        let aq = a[(q, j)];
        a[(p, j)] = r.r00.conj() * ap + r.r10.conj() * aq;
        a[(q, j)] = r.r01.conj() * ap + r.r11.conj() * aq;
    }
    // The rotation annihilates the pivot pair; clean rounding residue.
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V ← V·R.
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * r.r00 + vq * r.r10;
        v[(i, q)] = vp * r.r01 + vq * r.r11;
    }
}
