//! Finite-dimensional calculus in the algebra generated by the pair:
//! elements are four optional scalar coefficients plus one 2x2 fiber per
//! eigenvalue of H, and every per-element question is answered fiberwise.

mod calculus;
mod element;
mod fiber;

pub use calculus::{
    drazin, inverse, is_cor, is_invertible, kernel_basis, kernel_direction_closed_form,
    moore_penrose, operator_norm, rank_profile, spectrum, trace, CorReport, CorVerdict,
    DrazinResult, FiberCorStatus, FiberRankProfile,
};
pub use element::{symbol_of_word, AlgebraElement, Coefficients, Letter, WordTerm};
pub use fiber::{Fiber, Mat2};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("elements belong to different decompositions")]
    DecompositionMismatch,
    #[error("expected {expected} fibers, got {got}")]
    FiberCountMismatch { expected: usize, got: usize },
    #[error("fiber attached to {got} but the decomposition carries {expected}")]
    FiberValueMismatch { expected: f64, got: f64 },
    #[error("coefficient missing for a non-trivial subspace")]
    MissingCoefficient,
    #[error("element is not invertible")]
    SingularElement,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{generate_pair, halmos_decompose, validate_pair, RandomPairSpec};
    use crate::numerics::{null_basis, CMatrix, Tolerances};
    use num_complex::Complex64 as C64;
    use std::sync::Arc;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    /// Generic 2x2 fixture: P = diag[1,0], Q with diagonal (x, 1−x).
    fn fixture_dec(x: f64) -> Arc<crate::canonical::HalmosDecomposition> {
        let p = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let s = (x * (1.0 - x)).sqrt();
        let q = CMatrix::from_real(2, 2, &[x, s, s, 1.0 - x]);
        let pair = validate_pair(&p, &q, &t()).unwrap();
        Arc::new(halmos_decompose(&pair, &t()).unwrap())
    }

    /// Mixed fixture with all four scalar blocks and two fibers.
    fn mixed_dec(seed: u64) -> Arc<crate::canonical::HalmosDecomposition> {
        let spec = RandomPairSpec {
            d00: 1,
            d01: 1,
            d10: 1,
            d11: 1,
            h_values: vec![0.3, 0.7],
            seed,
        };
        let (_, dec) = generate_pair(&spec, &t()).unwrap();
        Arc::new(dec)
    }

    fn word(dec: &Arc<crate::canonical::HalmosDecomposition>, terms: &[(f64, &[Letter])]) -> AlgebraElement {
        let terms: Vec<WordTerm> = terms
            .iter()
            .map(|(c, ls)| WordTerm {
                coeff: C64::new(*c, 0.0),
                letters: ls.to_vec(),
            })
            .collect();
        symbol_of_word(&terms, dec)
    }

    #[test]
    fn symbol_of_i_minus_q() {
        let dec = mixed_dec(1);
        let e = word(&dec, &[(1.0, &[Letter::I]), (-1.0, &[Letter::Q])]);
        let c = e.coefficients();
        assert!(c.a00.unwrap().norm() < 1e-15);
        assert!((c.a01.unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.a10.unwrap().norm() < 1e-15);
        assert!((c.a11.unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
        for f in e.fibers() {
            let h = f.lambda;
            let s = (h * (1.0 - h)).sqrt();
            let want = Mat2::from_real(1.0 - h, -s, -s, h);
            assert!(f.phi.add(&want.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-14);
        }
    }

    #[test]
    fn symbol_of_p_minus_q() {
        let dec = fixture_dec(0.25);
        let e = word(&dec, &[(1.0, &[Letter::P]), (-1.0, &[Letter::Q])]);
        let f = &e.fibers()[0];
        let h: f64 = 0.25;
        let s = (h * (1.0 - h)).sqrt();
        let want = Mat2::from_real(1.0 - h, -s, -s, h - 1.0);
        assert!(f.phi.add(&want.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
        // characteristic polynomial is λ² + t − 1
        let (l1, l2) = f.phi.eigenvalues();
        assert!((l1.re - (1.0f64 - h).sqrt()).abs() < 1e-12);
        assert!((l2.re + (1.0f64 - h).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn linear_combination_determinant_and_trace() {
        let (a, b) = (2.0, -3.0);
        let dec = mixed_dec(2);
        let e = word(&dec, &[(a, &[Letter::P]), (b, &[Letter::Q])]);
        for f in e.fibers() {
            let t_val = f.lambda;
            assert!((f.phi.det().re - a * b * (1.0 - t_val)).abs() < 1e-12);
            assert!((f.phi.trace().re - (a + b)).abs() < 1e-12);
        }
    }

    #[test]
    fn product_of_p_and_q_fiber() {
        let dec = fixture_dec(0.25);
        let e = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        let h: f64 = 0.25;
        let s = (h * (1.0 - h)).sqrt();
        let want = Mat2::from_real(h, s, 0.0, 0.0);
        assert!(e.fibers()[0].phi.add(&want.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
    }

    #[test]
    fn additive_identity_and_double_adjoint() {
        let dec = mixed_dec(3);
        let e = word(&dec, &[(1.0, &[Letter::P, Letter::Q, Letter::P])]);
        let z = AlgebraElement::zero(dec.clone());
        let sum = e.add(&z).unwrap();
        assert!((&sum.assemble() - &e.assemble()).max_abs() < 1e-12);
        let back = e.adjoint().adjoint();
        assert!((&back.assemble() - &e.assemble()).max_abs() < 1e-12);
    }

    #[test]
    fn assemble_consistency() {
        let dec = mixed_dec(4);
        let zero = AlgebraElement::zero(dec.clone());
        assert!(zero.assemble().max_abs() < 1e-12);

        // P symbol assembles to P itself.
        let pair = crate::canonical::reconstruct(&dec);
        let p_sym = AlgebraElement::generator(dec.clone(), Letter::P);
        assert!((&p_sym.assemble() - pair.p()).max_abs() < 1e-9);

        // I − Q assembles to I − Q computed directly.
        let e = word(&dec, &[(1.0, &[Letter::I]), (-1.0, &[Letter::Q])]);
        let direct = &CMatrix::identity(pair.dim()) - pair.q();
        assert!((&e.assemble() - &direct).max_abs() < 1e-9);
    }

    #[test]
    fn spectrum_examples() {
        let dec = fixture_dec(0.25);
        let e = word(&dec, &[(1.0, &[Letter::P]), (-1.0, &[Letter::Q])]);
        let spec = spectrum(&e, &t());
        assert_eq!(spec.len(), 2);
        let r = (0.75f64).sqrt();
        assert!(spec.iter().any(|z| (z - C64::new(r, 0.0)).norm() < 1e-10));
        assert!(spec.iter().any(|z| (z - C64::new(-r, 0.0)).norm() < 1e-10));

        let one = AlgebraElement::identity(mixed_dec(5));
        let spec1 = spectrum(&one, &t());
        assert_eq!(spec1.len(), 1);
        assert!((spec1[0] - C64::new(1.0, 0.0)).norm() < 1e-12);

        // PQ at t = 0.5 → {0, 0.5}
        let spec_fix = fixture_spectrum_pq();
        assert!(spec_fix.iter().any(|z| z.norm() < 1e-10));
        assert!(spec_fix.iter().any(|z| (z - C64::new(0.5, 0.0)).norm() < 1e-10));
    }

    fn fixture_spectrum_pq() -> Vec<C64> {
        let spec = RandomPairSpec {
            d00: 0,
            d01: 0,
            d10: 0,
            d11: 0,
            h_values: vec![0.5],
            seed: 9,
        };
        let (_, dec) = generate_pair(&spec, &t()).unwrap();
        let dec = Arc::new(dec);
        let e = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        spectrum(&e, &t())
    }

    #[test]
    fn norm_examples() {
        let dec = fixture_dec(0.25);
        let p_sym = AlgebraElement::generator(dec.clone(), Letter::P);
        assert!((operator_norm(&p_sym) - 1.0).abs() < 1e-12);
        assert!(operator_norm(&AlgebraElement::zero(dec.clone())) < 1e-15);
        let pq = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        assert!((operator_norm(&pq) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn kernel_of_i_minus_q_is_im_q() {
        let dec = fixture_dec(0.25);
        let e = word(&dec, &[(1.0, &[Letter::I]), (-1.0, &[Letter::Q])]);
        let k = kernel_basis(&e, &t());
        assert_eq!(k.dim(), 1);
        // Q v = v for kernel vectors of I − Q.
        let pair = crate::canonical::reconstruct(&dec);
        let v = &k.columns()[0];
        let qv = pair.q().mul_vec(v);
        let res: f64 = qv
            .iter()
            .zip(v)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-9);
        // Fiber direction is (√t, √(1−t)) up to the basis.
        let alpha = (0.25f64).sqrt();
        let beta = (0.75f64).sqrt();
        let expect: Vec<C64> = dec
            .m_column(0)
            .iter()
            .zip(&dec.m_prime_column(0))
            .map(|(m, mp)| m * alpha + mp * beta)
            .collect();
        let overlap: C64 = expect.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_trivial_cases() {
        let dec = mixed_dec(6);
        let inv = AlgebraElement::identity(dec.clone());
        assert_eq!(kernel_basis(&inv, &t()).dim(), 0);
        let zero = AlgebraElement::zero(dec.clone());
        assert_eq!(kernel_basis(&zero, &t()).dim(), dec.dim());
    }

    #[test]
    fn kernel_closed_form_agrees_with_extraction() {
        let dec = fixture_dec(0.25);
        let pq = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        let f = &pq.fibers()[0];
        let closed = kernel_direction_closed_form(f, &t()).expect("phase defined");
        let (x, y) = f.phi.null_vector();
        // Agreement up to a unit phase: the 2x2 determinant of the pair
        // of unit vectors must vanish.
        let det = closed.0 * y - closed.1 * x;
        assert!(det.norm() < 1e-10);
    }

    #[test]
    fn rank_profile_examples() {
        let dec = fixture_dec(0.25);
        let diff = word(&dec, &[(1.0, &[Letter::P]), (-1.0, &[Letter::Q])]);
        let prof = rank_profile(&diff, &t());
        assert_eq!(prof.ranks, vec![2]);

        let pq = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        let prof = rank_profile(&pq, &t());
        assert_eq!(prof.ranks, vec![1]);
        assert_eq!(prof.delta11, vec![0]);

        // Nilpotent fiber lands in Δ₁₀.
        let nil = AlgebraElement::new(
            dec.clone(),
            Coefficients::default(),
            vec![Fiber::new(0.25, Mat2::from_real(0.0, 1.0, 0.0, 0.0))],
        )
        .unwrap();
        let prof = rank_profile(&nil, &t());
        assert_eq!(prof.delta10, vec![0]);
    }

    #[test]
    fn inverse_examples() {
        let dec = mixed_dec(7);
        let one = AlgebraElement::identity(dec.clone());
        assert!(is_invertible(&one, &t()));
        let inv = inverse(&one, &t()).unwrap();
        assert!((&inv.assemble() - &CMatrix::identity(dec.dim())).max_abs() < 1e-9);

        let p_sym = AlgebraElement::generator(dec.clone(), Letter::P);
        assert!(!is_invertible(&p_sym, &t()));
        assert!(matches!(
            inverse(&p_sym, &t()),
            Err(AlgebraError::SingularElement)
        ));
    }

    #[test]
    fn inverse_of_p_plus_q_at_half() {
        let spec = RandomPairSpec {
            d00: 0,
            d01: 0,
            d10: 0,
            d11: 0,
            h_values: vec![0.5],
            seed: 12,
        };
        let (_, dec) = generate_pair(&spec, &t()).unwrap();
        let dec = Arc::new(dec);
        let e = word(&dec, &[(1.0, &[Letter::P]), (1.0, &[Letter::Q])]);
        let inv = inverse(&e, &t()).unwrap();
        let want = Mat2::from_real(1.0, -1.0, -1.0, 3.0);
        assert!(inv.fibers()[0].phi.add(&want.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-12);
        let prod = inv.assemble();
        let prod = &prod * &e.assemble();
        assert!((&prod - &CMatrix::identity(dec.dim())).max_abs() < 1e-8);
    }

    #[test]
    fn moore_penrose_identities_on_fixture() {
        let dec = fixture_dec(0.25);
        let pq = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        let pinv = moore_penrose(&pq, &t());
        let a = pq.assemble();
        let x = pinv.assemble();
        let axa = &(&a * &x) * &a;
        let xax = &(&x * &a) * &x;
        assert!((&axa - &a).max_abs() < 1e-9);
        assert!((&xax - &x).max_abs() < 1e-9);
        let ax = &a * &x;
        assert!(ax.hermitian_residual() < 1e-9);
        let xa = &x * &a;
        assert!(xa.hermitian_residual() < 1e-9);

        // Zero element maps to zero; invertible to the inverse.
        let z = AlgebraElement::zero(dec.clone());
        assert!(moore_penrose(&z, &t()).assemble().max_abs() < 1e-12);
    }

    #[test]
    fn drazin_examples() {
        let dec = fixture_dec(0.25);
        // Nilpotent fiber: index 2, zero inverse.
        let nil = AlgebraElement::new(
            dec.clone(),
            Coefficients::default(),
            vec![Fiber::new(0.25, Mat2::from_real(0.0, 1.0, 0.0, 0.0))],
        )
        .unwrap();
        let d = drazin(&nil, &t());
        assert_eq!(d.index, 2);
        assert!(d.inverse.assemble().max_abs() < 1e-12);

        // Rank-one trace-carrying fiber: F/(tr F)².
        let pq = word(&dec, &[(1.0, &[Letter::P, Letter::Q])]);
        let d = drazin(&pq, &t());
        assert_eq!(d.index, 1);
        let f = &d.inverse.fibers()[0].phi;
        let s = (0.25f64 * 0.75).sqrt();
        let want = Mat2::from_real(0.25 / 0.0625, s / 0.0625, 0.0, 0.0);
        assert!(f.add(&want.scale(C64::new(-1.0, 0.0))).max_abs() < 1e-10);

        // a = b = 1 with 1 ∉ σ(H): Drazin inverse is the ordinary inverse.
        let spec = RandomPairSpec {
            d00: 0,
            d01: 0,
            d10: 0,
            d11: 0,
            h_values: vec![0.5],
            seed: 21,
        };
        let (_, dec2) = generate_pair(&spec, &t()).unwrap();
        let dec2 = Arc::new(dec2);
        let e = word(&dec2, &[(1.0, &[Letter::P]), (1.0, &[Letter::Q])]);
        let d = drazin(&e, &t());
        assert_eq!(d.index, 0);
        let inv = inverse(&e, &t()).unwrap();
        assert!((&d.inverse.assemble() - &inv.assemble()).max_abs() < 1e-9);
        assert!(d.det_min.unwrap() > 0.4);
    }

    #[test]
    fn cor_examples() {
        let dec = mixed_dec(8);
        for letters in [&[Letter::P][..], &[Letter::P, Letter::Q][..], &[Letter::P, Letter::Q, Letter::P][..]] {
            let e = word(&dec, &[(1.0, letters)]);
            assert_eq!(is_cor(&e, &t()).verdict, CorVerdict::True, "{letters:?}");
        }
        // (PQ)²
        let e = word(&dec, &[(1.0, &[Letter::P, Letter::Q, Letter::P, Letter::Q])]);
        assert_eq!(is_cor(&e, &t()).verdict, CorVerdict::True);

        // i·P on a decomposition with non-trivial M00 fails on the
        // imaginary coefficient.
        let p = AlgebraElement::generator(dec.clone(), Letter::P);
        let ip = p.scale(C64::new(0.0, 1.0));
        assert_eq!(is_cor(&ip, &t()).verdict, CorVerdict::False);
    }

    #[test]
    fn trace_examples() {
        let dec = mixed_dec(9);
        let n = dec.dim() as f64;
        let one = AlgebraElement::identity(dec.clone());
        assert!((trace(&one) - C64::new(n, 0.0)).norm() < 1e-12);
        let diff = word(&dec, &[(1.0, &[Letter::P]), (-1.0, &[Letter::Q])]);
        // d01 − d10 = 1 − 1 = 0 on this fixture.
        assert!(trace(&diff).norm() < 1e-12);
        assert!(trace(&AlgebraElement::zero(dec.clone())).norm() < 1e-15);
    }

    #[test]
    fn cross_decomposition_arithmetic_rejected() {
        let a = AlgebraElement::identity(mixed_dec(10));
        let b = AlgebraElement::identity(mixed_dec(11));
        assert!(matches!(
            a.add(&b),
            Err(AlgebraError::DecompositionMismatch)
        ));
    }

    #[test]
    fn kernel_matches_assembled_null_space() {
        let dec = mixed_dec(12);
        let e = word(&dec, &[(1.0, &[Letter::I]), (-1.0, &[Letter::Q])]);
        let k = kernel_basis(&e, &t());
        let oracle = null_basis(&e.assemble(), 1e-9, &t()).unwrap();
        assert_eq!(k.dim(), oracle.dim());
        let angle = k.max_principal_angle(&oracle, &t()).unwrap();
        assert!(angle <= 1e-7, "angle {angle:.3e}");
    }
}
