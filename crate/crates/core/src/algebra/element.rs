//! Elements of the algebra generated by a projection pair, represented
//! as four optional scalar coefficients plus one 2x2 fiber per eigenvalue
//! of H.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::fiber::{Fiber, Mat2};
use super::AlgebraError;
use crate::canonical::HalmosDecomposition;
use crate::numerics::CMatrix;

/// Generators of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    P,
    Q,
    I,
}

/// One term of a linear combination of words over the generators.
#[derive(Debug, Clone)]
pub struct WordTerm {
    pub coeff: C64,
    pub letters: Vec<Letter>,
}

/// The four scalar coefficients; entries present exactly when the
/// corresponding subspace is non-trivial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coefficients {
    pub a00: Option<C64>,
    pub a01: Option<C64>,
    pub a10: Option<C64>,
    pub a11: Option<C64>,
}

impl Coefficients {
    pub fn present(&self) -> impl Iterator<Item = (&'static str, C64)> + '_ {
        [
            ("a00", self.a00),
            ("a01", self.a01),
            ("a10", self.a10),
            ("a11", self.a11),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|z| (k, z)))
    }
}

/// An element of the algebra, relative to one fixed decomposition.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    dec: Arc<HalmosDecomposition>,
    coeffs: Coefficients,
    fibers: Vec<Fiber>,
}

impl AlgebraElement {
    /// Wraps raw data, normalizing coefficient presence against the
    /// decomposition's dimensions and validating the fiber count.
    pub fn new(
        dec: Arc<HalmosDecomposition>,
        coeffs: Coefficients,
        fibers: Vec<Fiber>,
    ) -> Result<Self, AlgebraError> {
        let dims = dec.dims();
        if fibers.len() != dims.m {
            return Err(AlgebraError::FiberCountMismatch {
                expected: dims.m,
                got: fibers.len(),
            });
        }
        let norm = Coefficients {
            a00: coeffs.a00.filter(|_| dims.d00 > 0),
            a01: coeffs.a01.filter(|_| dims.d01 > 0),
            a10: coeffs.a10.filter(|_| dims.d10 > 0),
            a11: coeffs.a11.filter(|_| dims.d11 > 0),
        };
        for (want, have) in [
            (dims.d00 > 0, norm.a00.is_some()),
            (dims.d01 > 0, norm.a01.is_some()),
            (dims.d10 > 0, norm.a10.is_some()),
            (dims.d11 > 0, norm.a11.is_some()),
        ] {
            if want && !have {
                return Err(AlgebraError::MissingCoefficient);
            }
        }
        for (f, &h) in fibers.iter().zip(dec.h_values()) {
            if (f.lambda - h).abs() > 1e-12 {
                return Err(AlgebraError::FiberValueMismatch {
                    expected: h,
                    got: f.lambda,
                });
            }
        }
        Ok(Self {
            dec,
            coeffs: norm,
            fibers,
        })
    }

    /// Constant scalar multiple of the identity.
    pub fn scalar(dec: Arc<HalmosDecomposition>, z: C64) -> Self {
        let dims = dec.dims();
        let coeffs = Coefficients {
            a00: (dims.d00 > 0).then_some(z),
            a01: (dims.d01 > 0).then_some(z),
            a10: (dims.d10 > 0).then_some(z),
            a11: (dims.d11 > 0).then_some(z),
        };
        let fibers = dec
            .h_values()
            .iter()
            .map(|&h| Fiber::new(h, Mat2::identity().scale(z)))
            .collect();
        Self { dec, coeffs, fibers }
    }

    pub fn zero(dec: Arc<HalmosDecomposition>) -> Self {
        Self::scalar(dec, C64::new(0.0, 0.0))
    }

    pub fn identity(dec: Arc<HalmosDecomposition>) -> Self {
        Self::scalar(dec, C64::new(1.0, 0.0))
    }

    /// Symbol of a single generator.
    pub fn generator(dec: Arc<HalmosDecomposition>, letter: Letter) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let dims = dec.dims();
        let (pattern, fiber_of): (_, fn(f64) -> Mat2) = match letter {
            Letter::P => ((one, one, zero, zero), |_h| {
                Mat2::from_real(1.0, 0.0, 0.0, 0.0)
            }),
            Letter::Q => ((one, zero, one, zero), |h| {
                let s = (h * (1.0 - h)).sqrt();
                Mat2::from_real(h, s, s, 1.0 - h)
            }),
            Letter::I => ((one, one, one, one), |_h| Mat2::identity()),
        };
        let coeffs = Coefficients {
            a00: (dims.d00 > 0).then_some(pattern.0),
            a01: (dims.d01 > 0).then_some(pattern.1),
            a10: (dims.d10 > 0).then_some(pattern.2),
            a11: (dims.d11 > 0).then_some(pattern.3),
        };
        let fibers = dec
            .h_values()
            .iter()
            .map(|&h| Fiber::new(h, fiber_of(h)))
            .collect();
        Self { dec, coeffs, fibers }
    }

    pub fn decomposition(&self) -> &Arc<HalmosDecomposition> {
        &self.dec
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    fn check_same_dec(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.dec, &other.dec) || *self.dec == *other.dec {
            Ok(())
        } else {
            Err(AlgebraError::DecompositionMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_dec(other)?;
        let merge = |a: Option<C64>, b: Option<C64>| match (a, b) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        let coeffs = Coefficients {
            a00: merge(self.coeffs.a00, other.coeffs.a00),
            a01: merge(self.coeffs.a01, other.coeffs.a01),
            a10: merge(self.coeffs.a10, other.coeffs.a10),
            a11: merge(self.coeffs.a11, other.coeffs.a11),
        };
        let fibers = self
            .fibers
            .iter()
            .zip(&other.fibers)
            .map(|(f, g)| Fiber::new(f.lambda, f.phi.add(&g.phi)))
            .collect();
        Ok(Self {
            dec: self.dec.clone(),
            coeffs,
            fibers,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_dec(other)?;
        let merge = |a: Option<C64>, b: Option<C64>| match (a, b) {
            (Some(x), Some(y)) => Some(x * y),
            _ => None,
        };
        let coeffs = Coefficients {
            a00: merge(self.coeffs.a00, other.coeffs.a00),
            a01: merge(self.coeffs.a01, other.coeffs.a01),
            a10: merge(self.coeffs.a10, other.coeffs.a10),
            a11: merge(self.coeffs.a11, other.coeffs.a11),
        };
        let fibers = self
            .fibers
            .iter()
            .zip(&other.fibers)
            .map(|(f, g)| Fiber::new(f.lambda, f.phi.mul(&g.phi)))
            .collect();
        Ok(Self {
            dec: self.dec.clone(),
            coeffs,
            fibers,
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        let coeffs = Coefficients {
            a00: self.coeffs.a00.map(|a| a * z),
            a01: self.coeffs.a01.map(|a| a * z),
            a10: self.coeffs.a10.map(|a| a * z),
            a11: self.coeffs.a11.map(|a| a * z),
        };
        let fibers = self
            .fibers
            .iter()
            .map(|f| Fiber::new(f.lambda, f.phi.scale(z)))
            .collect();
        Self {
            dec: self.dec.clone(),
            coeffs,
            fibers,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Conjugate transpose: conjugated coefficients, adjoint fibers.
    pub fn adjoint(&self) -> Self {
        let coeffs = Coefficients {
            a00: self.coeffs.a00.map(|a| a.conj()),
            a01: self.coeffs.a01.map(|a| a.conj()),
            a10: self.coeffs.a10.map(|a| a.conj()),
            a11: self.coeffs.a11.map(|a| a.conj()),
        };
        let fibers = self
            .fibers
            .iter()
            .map(|f| Fiber::new(f.lambda, f.phi.adjoint()))
            .collect();
        Self {
            dec: self.dec.clone(),
            coeffs,
            fibers,
        }
    }

    /// The concrete matrix T·blockdiag(...)·T* in the original basis.
    pub fn assemble(&self) -> CMatrix {
        let n = self.dec.dim();
        let dims = self.dec.dims();
        let mut block = CMatrix::zeros(n, n);
        let mut at = 0usize;
        for (d, a) in [
            (dims.d00, self.coeffs.a00),
            (dims.d01, self.coeffs.a01),
            (dims.d10, self.coeffs.a10),
            (dims.d11, self.coeffs.a11),
        ] {
            if let Some(z) = a {
                for i in 0..d {
                    block[(at + i, at + i)] = z;
                }
            }
            at += d;
        }
        let m_start = self.dec.m_block_start();
        let mp_start = self.dec.m_prime_block_start();
        for (j, f) in self.fibers.iter().enumerate() {
            block[(m_start + j, m_start + j)] = f.phi.e[0][0];
            block[(m_start + j, mp_start + j)] = f.phi.e[0][1];
            block[(mp_start + j, m_start + j)] = f.phi.e[1][0];
            block[(mp_start + j, mp_start + j)] = f.phi.e[1][1];
        }
        let t = self.dec.basis();
        &(t * &block) * &t.adjoint()
    }
}

/// Symbol of a linear combination of words over {P, Q, I}: coefficients
/// and fibers are evaluated by the same generator calculus.
pub fn symbol_of_word(
    terms: &[WordTerm],
    dec: &Arc<HalmosDecomposition>,
) -> AlgebraElement {
    let mut acc = AlgebraElement::zero(dec.clone());
    for term in terms {
        let mut prod = AlgebraElement::identity(dec.clone());
        for &letter in &term.letters {
            let g = AlgebraElement::generator(dec.clone(), letter);
            prod = prod.mul(&g).expect("same decomposition by construction");
        }
        acc = acc
            .add(&prod.scale(term.coeff))
            .expect("same decomposition by construction");
    }
    acc
}
