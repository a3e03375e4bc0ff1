//! PSD square roots and polar factors.

use super::eig::hermitian_eig;
use super::svd::svd;
use super::{CMatrix, NumericsError, Tolerances};

/// Hermitian PSD square root of a Hermitian PSD matrix.
///
/// Eigenvalues below −1e-8 (after symmetrization) are rejected; small
/// negative rounding residue is clamped to zero.
pub fn psd_sqrt(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix, NumericsError> {
    let (values, vectors) = hermitian_eig(m, tol)?;
    const NEG_FLOOR: f64 = -1e-8;
    if let Some(&worst) = values.first() {
        if worst < NEG_FLOOR * m.max_abs().max(1.0) {
            return Err(NumericsError::NegativeEigenvalue { value: worst });
        }
    }
    // Eigenvalues at rounding-noise level are exact zeros of the input;
    // flooring them avoids the sqrt(eps) blowup in the root.
    let zero_floor = 1e-14 * values.last().map(|&v| v.abs()).unwrap_or(0.0).max(1e-300);
    let roots: Vec<f64> = values
        .iter()
        .map(|&v| if v <= zero_floor { 0.0 } else { v.sqrt() })
        .collect();
    let scaled = vectors.mul_diag(
        &roots
            .iter()
            .map(|&r| num_complex::Complex64::new(r, 0.0))
            .collect::<Vec<_>>(),
    );
    Ok((&scaled * &vectors.adjoint()).hermitized())
}

/// Unitary factor V of the left polar decomposition M = √(M·M*) · V.
///
/// Convention: the Hermitian factor acts on the left (C = √(M M*)), so
/// V = U·W* from the SVD M = U Σ W*. Requires M square with numerically
/// trivial kernel.
pub fn polar_unitary_part(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let f = svd(m, tol)?;
    let smax = f.sigma_max();
    let smin = f.sigma_min();
    if smax <= 0.0 || smin <= 1e-10 * smax {
        return Err(NumericsError::SingularInput {
            ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    Ok(&f.u * &f.v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let id = CMatrix::identity(3);
        assert!((&psd_sqrt(&id, &t()).unwrap() - &id).max_abs() < 1e-12);
        let d = CMatrix::from_real(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let r = psd_sqrt(&d, &t()).unwrap();
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((r[(1, 1)].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_its_own_root() {
        let x = 0.25f64;
        let s = (x * (1.0 - x)).sqrt();
        let q = CMatrix::from_real(2, 2, &[x, s, s, 1.0 - x]);
        let r = psd_sqrt(&q, &t()).unwrap();
        assert!((&r - &q).max_abs() < 1e-9);
        assert!((&(&r * &r) - &q).max_abs() < 1e-9);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let d = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -0.5]);
        assert!(matches!(
            psd_sqrt(&d, &t()),
            Err(NumericsError::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn polar_of_unitary_is_itself() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_real(2, 2, &[s, s, -s, s]);
        let v = polar_unitary_part(&u, &t()).unwrap();
        assert!((&v - &u).max_abs() < 1e-12);
    }

    #[test]
    fn polar_of_positive_diagonal_is_identity() {
        let d = CMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let v = polar_unitary_part(&d, &t()).unwrap();
        assert!((&v - &CMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn polar_hand_example() {
        // [[0,2],[1,0]] = sqrt(M M*) · [[0,1],[1,0]]
        let m = CMatrix::from_real(2, 2, &[0.0, 2.0, 1.0, 0.0]);
        let v = polar_unitary_part(&m, &t()).unwrap();
        let want = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((&v - &want).max_abs() < 1e-12);
        // M = C·V with C = psd_sqrt(M M*)
        let c = psd_sqrt(&(&m * &m.adjoint()), &t()).unwrap();
        assert!((&(&c * &v) - &m).max_abs() < 1e-9);
    }

    #[test]
    fn polar_rejects_singular() {
        let m = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            polar_unitary_part(&m, &t()),
            Err(NumericsError::SingularInput { .. })
        ));
    }

    #[test]
    fn complex_polar_consistency() {
        let m = CMatrix::new(
            2,
            2,
            vec![
                C64::new(0.3, 0.7),
                C64::new(-1.1, 0.2),
                C64::new(0.9, -0.4),
                C64::new(0.5, 0.6),
            ],
        )
        .unwrap();
        let v = polar_unitary_part(&m, &t()).unwrap();
        let c = psd_sqrt(&(&m * &m.adjoint()), &t()).unwrap();
        assert!(v.unitary_residual() < 1e-10);
        assert!((&(&c * &v) - &m).max_abs() < 1e-9);
    }
}
