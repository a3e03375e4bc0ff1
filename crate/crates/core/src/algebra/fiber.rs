//! 2x2 complex fiber arithmetic with closed forms.

use num_complex::Complex64 as C64;

/// Dense 2x2 complex matrix; the value of a symbol at one point of the
/// spectrum of H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

impl Mat2 {
    pub fn new(e00: C64, e01: C64, e10: C64, e11: C64) -> Self {
        Self {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        Self::new(o, z, z, o)
    }

    pub fn from_real(e00: f64, e01: f64, e10: f64, e11: f64) -> Self {
        Self::new(
            C64::new(e00, 0.0),
            C64::new(e01, 0.0),
            C64::new(e10, 0.0),
            C64::new(e11, 0.0),
        )
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues from the characteristic polynomial.
    pub fn eigenvalues(&self) -> (C64, C64) {
        let t = self.trace();
        let d = self.det();
        let disc = (t * t - d * 4.0).sqrt();
        ((t + disc) * 0.5, (t - disc) * 0.5)
    }

    /// Singular values, descending.
    ///
    /// The large one comes from the Gram matrix; the small one from
    /// σ₁σ₂ = |det|, which avoids the half-precision cancellation the
    /// subtracted Gram eigenvalue would suffer.
    pub fn singular_values(&self) -> (f64, f64) {
        let a = self.e[0][0].norm_sqr() + self.e[1][0].norm_sqr();
        let d = self.e[0][1].norm_sqr() + self.e[1][1].norm_sqr();
        let b = self.e[0][0].conj() * self.e[0][1] + self.e[1][0].conj() * self.e[1][1];
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        let hi = (mid + disc).max(0.0).sqrt();
        let lo = if hi > 0.0 { self.det().norm() / hi } else { 0.0 };
        (hi, lo.min(hi))
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let inv = C64::new(1.0, 0.0) / d;
        Some(Mat2::new(
            self.e[1][1] * inv,
            -self.e[0][1] * inv,
            -self.e[1][0] * inv,
            self.e[0][0] * inv,
        ))
    }

    /// Unit null vector for a rank-one matrix: the right singular vector of
    /// the smallest singular value, by direct extraction from the Gram
    /// matrix.
    pub fn null_vector(&self) -> (C64, C64) {
        let a = self.e[0][0].norm_sqr() + self.e[1][0].norm_sqr();
        let d = self.e[0][1].norm_sqr() + self.e[1][1].norm_sqr();
        let b = self.e[0][0].conj() * self.e[0][1] + self.e[1][0].conj() * self.e[1][1];
        // Smallest Gram eigenvalue σ₂², computed through |det| to dodge
        // the cancellation in mid − disc.
        let (s1, s2) = self.singular_values();
        let lo = if s1 > 0.0 { s2 * s2 } else { 0.0 };
        // Eigenvector candidates (b, lo − a) and (lo − d, b̄); pick the
        // better-conditioned one.
        let c1 = (b, C64::new(lo - a, 0.0));
        let c2 = (C64::new(lo - d, 0.0), b.conj());
        let n1 = c1.0.norm_sqr() + c1.1.norm_sqr();
        let n2 = c2.0.norm_sqr() + c2.1.norm_sqr();
        let (x, y, nn) = if n1 >= n2 {
            (c1.0, c1.1, n1)
        } else {
            (c2.0, c2.1, n2)
        };
        if nn == 0.0 {
            // Gram matrix is scalar; any direction is as good.
            return (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        }
        let inv = 1.0 / nn.sqrt();
        (x * inv, y * inv)
    }

    /// Rank-aware Moore-Penrose pseudoinverse with the given numerical rank.
    pub fn pinv_with_rank(&self, rank: u8) -> Mat2 {
        match rank {
            0 => Mat2::zero(),
            2 => self
                .inverse()
                .expect("rank-2 fiber must be invertible"),
            _ => {
                // Rank one: M ≈ σ u v*, so M† = v u*/σ. Build u, v from the
                // dominant singular pair.
                let (x, y) = self.null_vector();
                // v1 is orthogonal to the null vector (x, y).
                let v1 = (-y.conj(), x.conj());
                let u_raw = (
                    self.e[0][0] * v1.0 + self.e[0][1] * v1.1,
                    self.e[1][0] * v1.0 + self.e[1][1] * v1.1,
                );
                let sigma = (u_raw.0.norm_sqr() + u_raw.1.norm_sqr()).sqrt();
                if sigma == 0.0 {
                    return Mat2::zero();
                }
                let u = (u_raw.0 / sigma, u_raw.1 / sigma);
                // v u* / σ
                let inv = 1.0 / sigma;
                Mat2::new(
                    v1.0 * u.0.conj() * inv,
                    v1.0 * u.1.conj() * inv,
                    v1.1 * u.0.conj() * inv,
                    v1.1 * u.1.conj() * inv,
                )
            }
        }
    }
}

/// One 2x2 fiber of an algebra element together with the eigenvalue of H
/// it is attached to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fiber {
    pub lambda: f64,
    pub phi: Mat2,
}

impl Fiber {
    pub fn new(lambda: f64, phi: Mat2) -> Self {
        Self { lambda, phi }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_shift() {
        let m = Mat2::from_real(0.0, 1.0, 0.0, 0.0);
        let (l1, l2) = m.eigenvalues();
        assert!(l1.norm() < 1e-15 && l2.norm() < 1e-15);
        let (s1, s2) = m.singular_values();
        assert!((s1 - 1.0).abs() < 1e-15 && s2.abs() < 1e-15);
    }

    #[test]
    fn null_vector_of_rank_one() {
        let m = Mat2::from_real(0.25, 0.4330127018922193, 0.0, 0.0);
        let (x, y) = m.null_vector();
        let img0 = m.e[0][0] * x + m.e[0][1] * y;
        let img1 = m.e[1][0] * x + m.e[1][1] * y;
        assert!(img0.norm() < 1e-14 && img1.norm() < 1e-14);
    }

    #[test]
    fn pinv_rank_one_satisfies_identities() {
        let m = Mat2::from_real(0.25, 0.4330127018922193, 0.0, 0.0);
        let p = m.pinv_with_rank(1);
        let mpm = m.mul(&p).mul(&m);
        assert!(mpm.add(&m.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
        let pmp = p.mul(&m).mul(&p);
        assert!(pmp.add(&p.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
        // symmetry of both products
        let mp = m.mul(&p);
        assert!(mp.add(&mp.adjoint().scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
        let pm = p.mul(&m);
        assert!(pm.add(&pm.adjoint().scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
    }
}
