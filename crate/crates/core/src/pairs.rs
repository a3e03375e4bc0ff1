//! Pair-level results: the spectrum of P − Q, the anticommutator, the
//! Fredholm index and trace identities, the distance from P to the
//! projections orthogonal to their symmetry, and intertwining unitaries.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Coefficients, Fiber, Mat2};
use crate::canonical::{Dims, HalmosDecomposition};
use crate::numerics::{CMatrix, NumericsError, Tolerances};

#[derive(Debug, Error)]
pub enum PairsError {
    #[error("no intertwining unitary exists: dim M01 = {d01} differs from dim M10 = {d10}")]
    NoIntertwiner { d01: usize, d10: usize },
    #[error("invalid intertwiner parameters: {0}")]
    InvalidParams(String),
    #[error("algebra intertwiners require trivial M01 and M10 (have {d01}, {d10})")]
    Condition000Violated { d01: usize, d10: usize },
    #[error("scalar is not unimodular: |z| = {modulus}")]
    NotUnimodular { modulus: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// Distance regime of §`symmetry_distance`: the closed formula applies on
/// the generic side, the degenerate side is pinned at distance one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRegime {
    Generic,
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct DistanceReport {
    /// x = ‖PUP‖ with U = 2Q − I.
    pub x: f64,
    pub value: f64,
    pub regime: DistanceRegime,
}

/// Aggregate answers for one pair.
#[derive(Debug, Clone)]
pub struct PairReport {
    pub dims: Dims,
    pub h_values: Vec<f64>,
    pub diff_spectrum: Vec<f64>,
    pub anticomm_spectrum: Vec<f64>,
    pub anticomm_norm: f64,
    pub pq_norm: f64,
    pub fredholm_index: i64,
    /// Smallest eigenvalue of H; None for commuting pairs. Finite
    /// dimension makes every pair Fredholm, but this margin shows how
    /// close H is to losing invertibility.
    pub h_min: Option<f64>,
    /// tr (P−Q)^k for odd k.
    pub trace_powers: BTreeMap<u32, f64>,
    pub distance: DistanceReport,
    pub intertwiner_exists: bool,
}

/// Spectrum of P − Q from the decomposition data: ±√(1−λ) over the
/// fibers, ±1 and 0 exactly when the matching subspaces are non-trivial.
pub fn diff_spectrum(dec: &HalmosDecomposition, tol: &Tolerances) -> Vec<f64> {
    let dims = dec.dims();
    let mut points = Vec::new();
    for &h in dec.h_values() {
        let r = (1.0 - h).sqrt();
        points.push(r);
        points.push(-r);
    }
    if dims.d01 > 0 {
        points.push(1.0);
    }
    if dims.d10 > 0 {
        points.push(-1.0);
    }
    if dims.d00 + dims.d11 > 0 {
        points.push(0.0);
    }
    dedup_sorted(points, tol.set_match)
}

/// Spectrum and norm of PQ + QP, plus ‖PQ‖, all read off the fibers.
pub struct AnticommutatorReport {
    pub spectrum: Vec<f64>,
    pub norm: f64,
    pub pq_norm: f64,
}

pub fn anticommutator_analysis(
    dec: &HalmosDecomposition,
    tol: &Tolerances,
) -> AnticommutatorReport {
    let dims = dec.dims();
    let mut points = Vec::new();
    for &h in dec.h_values() {
        let r = h.sqrt();
        points.push(h + r);
        points.push(h - r);
    }
    if dims.d00 > 0 {
        points.push(2.0);
    }
    if dims.d01 + dims.d10 + dims.d11 > 0 {
        points.push(0.0);
    }
    let spectrum = dedup_sorted(points, tol.set_match);
    let norm = spectrum.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let h_max = dec.h_values().iter().cloned().fold(0.0f64, f64::max);
    let mut pq_norm = h_max.sqrt();
    if dims.d00 > 0 {
        pq_norm = pq_norm.max(1.0);
    }
    AnticommutatorReport {
        spectrum,
        norm,
        pq_norm,
    }
}

/// Index of the Fredholm pair: dim M01 − dim M10.
pub fn fredholm_index(dec: &HalmosDecomposition) -> i64 {
    let dims = dec.dims();
    dims.d01 as i64 - dims.d10 as i64
}

/// Smallest eigenvalue of H, the pair's invertibility margin.
pub fn invertibility_margin(dec: &HalmosDecomposition) -> Option<f64> {
    dec.h_values().iter().cloned().reduce(f64::min)
}

/// tr (P−Q)^k: d01 − d10 for every odd k; for even k = 2n the scalar
/// blocks contribute d01 + d10 and each fiber contributes 2(1−λ)^n.
pub fn trace_power_diff(dec: &HalmosDecomposition, k: u32) -> f64 {
    assert!(k >= 1, "power must be positive");
    let dims = dec.dims();
    if k % 2 == 1 {
        (dims.d01 as f64) - (dims.d10 as f64)
    } else {
        let n = k / 2;
        let fiber_sum: f64 = dec
            .h_values()
            .iter()
            .map(|&h| (1.0 - h).powi(n as i32))
            .sum();
        (dims.d01 + dims.d10) as f64 + 2.0 * fiber_sum
    }
}

/// Distance from P to the algebra projections orthogonal to their
/// symmetry with respect to U = 2Q − I.
///
/// ‖PUP‖ is assembled fiberwise: |2λ−1| on the fibers, 1 on M00 and M01,
/// 0 on M10 and M11. With M00 = M01 = {0} the closed formula applies;
/// otherwise the distance is 1 and ‖PUP‖ = 1 automatically.
pub fn symmetry_distance(dec: &HalmosDecomposition) -> DistanceReport {
    let dims = dec.dims();
    let mut x = dec
        .h_values()
        .iter()
        .map(|&h| (2.0 * h - 1.0).abs())
        .fold(0.0f64, f64::max);
    if dims.d00 > 0 || dims.d01 > 0 {
        x = 1.0;
    }
    if dims.d00 == 0 && dims.d01 == 0 {
        let value = ((1.0 - (1.0 - x * x).max(0.0).sqrt()) / 2.0).sqrt();
        DistanceReport {
            x,
            value,
            regime: DistanceRegime::Generic,
        }
    } else {
        debug_assert!((x - 1.0).abs() <= 1e-9);
        DistanceReport {
            x,
            value: 1.0,
            regime: DistanceRegime::Degenerate,
        }
    }
}

/// An intertwining unitary exists exactly when the two mixed subspaces
/// have equal dimension.
pub fn intertwiner_exists(dec: &HalmosDecomposition) -> bool {
    let dims = dec.dims();
    dims.d01 == dims.d10
}

/// Free parameters of the general intertwining unitary. `None` blocks
/// default to identities.
#[derive(Debug, Clone, Default)]
pub struct IntertwinerParams {
    /// Unitary on M00.
    pub u0: Option<CMatrix>,
    /// Unitary on M11.
    pub u1: Option<CMatrix>,
    /// Unitary block mapping M10 coordinates into M01.
    pub swap_to01: Option<CMatrix>,
    /// Unitary block mapping M01 coordinates into M10.
    pub swap_to10: Option<CMatrix>,
    /// Unitary on the generic part commuting with H.
    pub v: Option<CMatrix>,
}

/// Builds an intertwining unitary U with UP = QU and UQ = PU.
pub fn build_intertwiner(
    dec: &HalmosDecomposition,
    params: &IntertwinerParams,
    tol: &Tolerances,
) -> Result<CMatrix, PairsError> {
    let dims = dec.dims();
    if dims.d01 != dims.d10 {
        return Err(PairsError::NoIntertwiner {
            d01: dims.d01,
            d10: dims.d10,
        });
    }
    let n = dec.dim();
    let mut block = CMatrix::zeros(n, n);

    let u0 = unitary_or_identity(&params.u0, dims.d00, "U0", tol)?;
    let u1 = unitary_or_identity(&params.u1, dims.d11, "U1", tol)?;
    let s01 = unitary_or_identity(&params.swap_to01, dims.d01, "U_{01}", tol)?;
    let s10 = unitary_or_identity(&params.swap_to10, dims.d10, "U_{10}", tol)?;
    let v = unitary_or_identity(&params.v, dims.m, "V", tol)?;
    if let Some(v) = &v {
        let h = CMatrix::diagonal_real(dec.h_values());
        let comm = (&(v * &h) - &(&h * v)).max_abs();
        if comm > tol.commute {
            return Err(PairsError::InvalidParams(format!(
                "V does not commute with H (residual {comm:.3e})"
            )));
        }
    }

    let off00 = 0;
    let off01 = dims.d00;
    let off10 = off01 + dims.d01;
    let off11 = off10 + dims.d10;
    let off_m = dec.m_block_start();
    let off_mp = dec.m_prime_block_start();

    if let Some(u0) = &u0 {
        write_block(&mut block, off00, off00, u0);
    }
    if let Some(u1) = &u1 {
        write_block(&mut block, off11, off11, u1);
    }
    if let Some(s01) = &s01 {
        write_block(&mut block, off01, off10, s01);
    }
    if let Some(s10) = &s10 {
        write_block(&mut block, off10, off01, s10);
    }
    if dims.m > 0 {
        let v = v.expect("generic block present");
        let sqrt_h: Vec<C64> = dec
            .h_values()
            .iter()
            .map(|&h| C64::new(h.sqrt(), 0.0))
            .collect();
        let sqrt_ih: Vec<C64> = dec
            .h_values()
            .iter()
            .map(|&h| C64::new((1.0 - h).sqrt(), 0.0))
            .collect();
        write_block(&mut block, off_m, off_m, &v.mul_diag(&sqrt_h));
        write_block(&mut block, off_m, off_mp, &v.mul_diag(&sqrt_ih));
        write_block(&mut block, off_mp, off_m, &v.mul_diag(&sqrt_ih));
        write_block(
            &mut block,
            off_mp,
            off_mp,
            &v.mul_diag(&sqrt_h).scale_re(-1.0),
        );
    }

    let t = dec.basis();
    Ok(&(t * &block) * &t.adjoint())
}

/// Intertwiner chosen inside the algebra: unimodular scalars on M00 and
/// M11 plus a unimodular phase per fiber. Requires M01 = M10 = {0}.
pub fn build_intertwiner_in_algebra(
    dec: &Arc<HalmosDecomposition>,
    a0: C64,
    a1: C64,
    phases: &[C64],
    tol: &Tolerances,
) -> Result<AlgebraElement, PairsError> {
    let dims = dec.dims();
    if dims.d01 > 0 || dims.d10 > 0 {
        return Err(PairsError::Condition000Violated {
            d01: dims.d01,
            d10: dims.d10,
        });
    }
    if phases.len() != dims.m {
        return Err(PairsError::InvalidParams(format!(
            "expected {} fiber phases, got {}",
            dims.m,
            phases.len()
        )));
    }
    for z in [a0, a1].iter().chain(phases.iter()) {
        if (z.norm() - 1.0).abs() > tol.unimodular {
            return Err(PairsError::NotUnimodular { modulus: z.norm() });
        }
    }
    let coeffs = Coefficients {
        a00: (dims.d00 > 0).then_some(a0),
        a11: (dims.d11 > 0).then_some(a1),
        ..Coefficients::default()
    };
    let fibers = dec
        .h_values()
        .iter()
        .zip(phases)
        .map(|(&h, &phi)| {
            let c = h.sqrt();
            let s = (1.0 - h).sqrt();
            Fiber::new(h, Mat2::from_real(c, s, s, -c).scale(phi))
        })
        .collect();
    Ok(AlgebraElement::new(dec.clone(), coeffs, fibers)?)
}

/// Residuals certifying an intertwiner: unitarity, ‖UP − QU‖, ‖UQ − PU‖.
pub fn intertwining_residuals(u: &CMatrix, p: &CMatrix, q: &CMatrix) -> (f64, f64, f64) {
    let unitary = u.unitary_residual();
    let r1 = (&(u * p) - &(q * u)).max_abs();
    let r2 = (&(u * q) - &(p * u)).max_abs();
    (unitary, r1, r2)
}

/// Collects every pair-level answer into one report.
pub fn report(dec: &HalmosDecomposition, tol: &Tolerances) -> PairReport {
    let anticomm = anticommutator_analysis(dec, tol);
    let mut trace_powers = BTreeMap::new();
    for k in [1u32, 3, 5, 7] {
        trace_powers.insert(k, trace_power_diff(dec, k));
    }
    PairReport {
        dims: dec.dims(),
        h_values: dec.h_values().to_vec(),
        diff_spectrum: diff_spectrum(dec, tol),
        anticomm_spectrum: anticomm.spectrum,
        anticomm_norm: anticomm.norm,
        pq_norm: anticomm.pq_norm,
        fredholm_index: fredholm_index(dec),
        h_min: invertibility_margin(dec),
        trace_powers,
        distance: symmetry_distance(dec),
        intertwiner_exists: intertwiner_exists(dec),
    }
}

fn dedup_sorted(mut points: Vec<f64>, radius: f64) -> Vec<f64> {
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::new();
    for p in points {
        if out.last().map_or(true, |&q| (p - q).abs() > radius) {
            out.push(p);
        }
    }
    out
}

fn unitary_or_identity(
    given: &Option<CMatrix>,
    dim: usize,
    name: &str,
    tol: &Tolerances,
) -> Result<Option<CMatrix>, PairsError> {
    if dim == 0 {
        if given.is_some() {
            return Err(PairsError::InvalidParams(format!(
                "{name} given for a trivial block"
            )));
        }
        return Ok(None);
    }
    let m = match given {
        None => CMatrix::identity(dim),
        Some(m) => {
            if m.rows() != dim || m.cols() != dim {
                return Err(PairsError::InvalidParams(format!(
                    "{name} must be {dim}x{dim}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            let res = m.unitary_residual();
            if res > tol.factorization {
                return Err(PairsError::InvalidParams(format!(
                    "{name} is not unitary (residual {res:.3e})"
                )));
            }
            m.clone()
        }
    };
    Ok(Some(m))
}

fn write_block(target: &mut CMatrix, row: usize, col: usize, block: &CMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target[(row + i, col + j)] = block[(i, j)];
        }
    }
}
