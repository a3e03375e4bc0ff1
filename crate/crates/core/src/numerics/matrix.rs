//! Dense complex matrices, row-major.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::NumericsError;

/// Shorthand for the scalar type used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix with row-major storage.
///
/// Entries are validated to be finite on construction. Dimensions are
/// strictly positive; empty collections of vectors are represented by
/// [`super::SubspaceBasis`] instead.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    /// Builds a matrix from row-major entries. Rejects zero dimensions,
    /// length mismatches and non-finite entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 {
            return Err(NumericsError::EmptyDimensions { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(NumericsError::EntryCountMismatch {
                rows,
                cols,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(NumericsError::NonFiniteEntry);
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "zero-sized matrix");
        Self {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| C64::new(entries[i * cols + j], 0.0))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn diagonal_real(values: &[f64]) -> Self {
        let vals: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        Self::diagonal(&vals)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Entrywise max modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖M − M*‖_max; zero for exactly Hermitian matrices.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut r = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Averages M with M*; cleans rounding noise on matrices that are
    /// Hermitian by construction.
    pub fn hermitized(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        assert!(!cols.is_empty(), "from_columns needs at least one column");
        let rows = cols[0].len();
        assert!(cols.iter().all(|c| c.len() == rows));
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)] * v[j])
                    .sum::<C64>()
            })
            .collect()
    }

    /// self * diag(values); cheaper than building the diagonal matrix.
    pub fn mul_diag(&self, values: &[C64]) -> Self {
        assert_eq!(values.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * values[j])
    }

    /// Residual of M·M* − I; zero for unitary matrices.
    pub fn unitary_residual(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        (self * &self.adjoint())
            .sub(&Self::identity(n))
            .max_abs()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| -self[(i, j)])
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(CMatrix::new(0, 2, vec![]).is_err());
        assert!(CMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
        assert!(CMatrix::new(2, 2, vec![C64::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn adjoint_and_product() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, 1.0));
        let a = m.adjoint();
        assert_eq!(a[(0, 1)], m[(1, 0)].conj());
        let id = CMatrix::identity(2);
        assert_eq!((&m * &id).entries(), m.entries());
    }

    #[test]
    fn hermitized_is_hermitian() {
        let m = CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64));
        assert!(m.hermitized().hermitian_residual() < 1e-15);
    }
}
