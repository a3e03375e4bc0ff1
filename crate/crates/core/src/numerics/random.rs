//! Seeded random matrices for synthesis and search.

use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::CMatrix;

/// Standard normal deviate by Box-Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-distributed unitary: Gram-Schmidt of a complex Gaussian matrix
/// with the diagonal phase fixed. Deterministic per rng state.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let gauss = CMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| gauss.column(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let prev = cols[k].clone();
                let overlap: C64 = prev
                    .iter()
                    .zip(cols[j].iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                for (vj, pk) in cols[j].iter_mut().zip(&prev) {
                    *vj -= overlap * pk;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let inv = 1.0 / norm;
        for z in cols[j].iter_mut() {
            *z *= inv;
        }
        let pivot = cols[j][j];
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            for z in cols[j].iter_mut() {
                *z *= phase;
            }
        }
    }
    CMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(12, &mut rng);
        assert!(u.unitary_residual() < 1e-12);
        let mut rng2 = ChaCha8Rng::seed_from_u64(1);
        let u2 = random_unitary(12, &mut rng2);
        assert_eq!(u.entries(), u2.entries());
    }
}
