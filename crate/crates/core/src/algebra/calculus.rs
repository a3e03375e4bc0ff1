//! Per-element questions, answered coefficientwise and fiberwise.

use num_complex::Complex64 as C64;

use super::element::AlgebraElement;
use super::fiber::{Fiber, Mat2};
use super::AlgebraError;
use crate::numerics::{SubspaceBasis, Tolerances};

/// Numerical rank classification of the fibers.
///
/// `delta0`, `delta10`, `delta11` and `delta2` partition the fiber
/// indices: rank zero, rank one with (numerically) zero trace, rank one
/// with non-zero trace, full rank. Indices whose classification margin is
/// within a factor ten of the threshold are additionally listed in
/// `indeterminate`.
#[derive(Debug, Clone, Default)]
pub struct FiberRankProfile {
    pub ranks: Vec<u8>,
    pub delta0: Vec<usize>,
    pub delta10: Vec<usize>,
    pub delta11: Vec<usize>,
    pub delta2: Vec<usize>,
    pub indeterminate: Vec<usize>,
}

/// Ranks from the singular values of each 2x2 fiber, with a relative
/// threshold and an absolute floor.
pub fn rank_profile(element: &AlgebraElement, tol: &Tolerances) -> FiberRankProfile {
    let mut profile = FiberRankProfile::default();
    for (j, f) in element.fibers().iter().enumerate() {
        let (s1, s2) = f.phi.singular_values();
        let thresh = (tol.rank * s1).max(tol.rank_floor);
        let rank: u8 = if s1 <= thresh {
            0
        } else if s2 <= thresh {
            1
        } else {
            2
        };
        profile.ranks.push(rank);
        let mut borderline = in_gray_zone(s1, thresh) || in_gray_zone(s2, thresh);
        match rank {
            0 => profile.delta0.push(j),
            2 => profile.delta2.push(j),
            _ => {
                let tr = f.phi.trace().norm();
                let tr_thresh = (tol.rank * s1).max(tol.rank_floor);
                borderline |= in_gray_zone(tr, tr_thresh);
                if tr <= tr_thresh {
                    profile.delta10.push(j);
                } else {
                    profile.delta11.push(j);
                }
            }
        }
        if borderline {
            profile.indeterminate.push(j);
        }
    }
    profile
}

fn in_gray_zone(value: f64, threshold: f64) -> bool {
    value > threshold / 10.0 && value < threshold * 10.0
}

/// Scale used for coefficient-zero decisions: the element's operator norm
/// with a floor, so the decision matches the relative cutoff an assembled
/// null space would use.
fn element_scale(element: &AlgebraElement) -> f64 {
    operator_norm(element).max(1e-12)
}

fn coeff_is_zero(a: C64, scale: f64, tol: &Tolerances) -> bool {
    a.norm() <= tol.coeff_zero * scale
}

/// Spectrum as a set: the present coefficients plus the eigenvalues of
/// every fiber, de-duplicated within the matching radius.
pub fn spectrum(element: &AlgebraElement, tol: &Tolerances) -> Vec<C64> {
    let mut points: Vec<C64> = element.coefficients().present().map(|(_, z)| z).collect();
    for f in element.fibers() {
        let (l1, l2) = f.phi.eigenvalues();
        points.push(l1);
        points.push(l2);
    }
    let mut out: Vec<C64> = Vec::new();
    for p in points {
        if !out.iter().any(|q| (q - p).norm() <= tol.set_match) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    out
}

/// Operator norm: the maximum of the coefficient moduli and the largest
/// fiber singular value.
pub fn operator_norm(element: &AlgebraElement) -> f64 {
    let coeff_max = element
        .coefficients()
        .present()
        .map(|(_, z)| z.norm())
        .fold(0.0f64, f64::max);
    let fiber_max = element
        .fibers()
        .iter()
        .map(|f| f.phi.singular_values().0)
        .fold(0.0f64, f64::max);
    coeff_max.max(fiber_max)
}

/// Trace: Σ a_ij·dim(M_ij) + Σ_j tr Φ(λ_j).
pub fn trace(element: &AlgebraElement) -> C64 {
    let dims = element.decomposition().dims();
    let mut acc = C64::new(0.0, 0.0);
    for (key, z) in element.coefficients().present() {
        let d = match key {
            "a00" => dims.d00,
            "a01" => dims.d01,
            "a10" => dims.d10,
            _ => dims.d11,
        };
        acc += z * (d as f64);
    }
    for f in element.fibers() {
        acc += f.phi.trace();
    }
    acc
}

/// Kernel, built blockwise: whole scalar blocks whose coefficient
/// vanishes, both directions of rank-zero fibers, the null direction of
/// rank-one fibers, nothing for full-rank fibers — all mapped through the
/// adapted basis.
pub fn kernel_basis(element: &AlgebraElement, tol: &Tolerances) -> SubspaceBasis {
    let dec = element.decomposition();
    let dims = dec.dims();
    let scale = element_scale(element);
    let t = dec.basis();
    let mut cols: Vec<Vec<C64>> = Vec::new();

    let mut at = 0usize;
    for (d, a) in [
        (dims.d00, element.coefficients().a00),
        (dims.d01, element.coefficients().a01),
        (dims.d10, element.coefficients().a10),
        (dims.d11, element.coefficients().a11),
    ] {
        if let Some(z) = a {
            if coeff_is_zero(z, scale, tol) {
                for i in 0..d {
                    cols.push(t.column(at + i));
                }
            }
        }
        at += d;
    }

    let profile = rank_profile(element, tol);
    for (j, f) in element.fibers().iter().enumerate() {
        match profile.ranks[j] {
            0 => {
                cols.push(dec.m_column(j));
                cols.push(dec.m_prime_column(j));
            }
            1 => {
                let (x, y) = f.phi.null_vector();
                let mc = dec.m_column(j);
                let mpc = dec.m_prime_column(j);
                let v: Vec<C64> = mc
                    .iter()
                    .zip(&mpc)
                    .map(|(a, b)| a * x + b * y)
                    .collect();
                cols.push(v);
            }
            _ => {}
        }
    }

    SubspaceBasis::new(dec.dim(), cols, tol)
        .expect("kernel columns are orthonormal by construction")
}

/// Closed-form null direction of a rank-one fiber in fiber coordinates:
/// (u·χ₁, −χ₀) with u the phase of φ₀₁φ̄₀₀ + φ₁₁φ̄₁₀. Returns None when
/// the phase argument is numerically zero and the phase is undefined.
pub fn kernel_direction_closed_form(fiber: &Fiber, tol: &Tolerances) -> Option<(C64, C64)> {
    let m = &fiber.phi;
    let phase_arg = m.e[0][1] * m.e[0][0].conj() + m.e[1][1] * m.e[1][0].conj();
    let scale = m.max_abs();
    if phase_arg.norm() <= tol.rank * scale * scale {
        return None;
    }
    let u = phase_arg / phase_arg.norm();
    let phi_total: f64 = m.e.iter().flatten().map(|z| z.norm_sqr()).sum();
    if phi_total == 0.0 {
        return None;
    }
    let chi0 = ((m.e[0][0].norm_sqr() + m.e[1][0].norm_sqr()) / phi_total).sqrt();
    let chi1 = ((m.e[0][1].norm_sqr() + m.e[1][1].norm_sqr()) / phi_total).sqrt();
    Some((u * chi1, C64::new(-chi0, 0.0)))
}

/// Invertibility: every fiber of full rank and every present coefficient
/// away from zero.
pub fn is_invertible(element: &AlgebraElement, tol: &Tolerances) -> bool {
    let scale = element_scale(element);
    let coeffs_ok = element
        .coefficients()
        .present()
        .all(|(_, z)| !coeff_is_zero(z, scale, tol));
    let profile = rank_profile(element, tol);
    coeffs_ok && profile.delta2.len() == element.fibers().len()
}

/// Inverse: coefficientwise reciprocals and fiberwise 2x2 inverses.
pub fn inverse(
    element: &AlgebraElement,
    tol: &Tolerances,
) -> Result<AlgebraElement, AlgebraError> {
    if !is_invertible(element, tol) {
        return Err(AlgebraError::SingularElement);
    }
    let coeffs = map_coeffs(element, |z| C64::new(1.0, 0.0) / z);
    let fibers = element
        .fibers()
        .iter()
        .map(|f| {
            Fiber::new(
                f.lambda,
                f.phi.inverse().expect("full-rank fiber"),
            )
        })
        .collect();
    AlgebraElement::new(element.decomposition().clone(), coeffs, fibers)
}

/// Moore-Penrose inverse: reciprocal of non-zero coefficients, zero for
/// vanishing ones, rank-aware 2x2 pseudoinverse per fiber.
pub fn moore_penrose(element: &AlgebraElement, tol: &Tolerances) -> AlgebraElement {
    let scale = element_scale(element);
    let coeffs = map_coeffs(element, |z| {
        if coeff_is_zero(z, scale, tol) {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0, 0.0) / z
        }
    });
    let profile = rank_profile(element, tol);
    let fibers = element
        .fibers()
        .iter()
        .enumerate()
        .map(|(j, f)| Fiber::new(f.lambda, f.phi.pinv_with_rank(profile.ranks[j])))
        .collect();
    AlgebraElement::new(element.decomposition().clone(), coeffs, fibers)
        .expect("pseudoinverse shares the element's shape")
}

/// Drazin data: the index, the inverse, and the separation margins of the
/// Drazin criterion (minimum |det| over full-rank fibers, minimum |tr|
/// over trace-carrying rank-one fibers).
#[derive(Debug, Clone)]
pub struct DrazinResult {
    pub index: u8,
    pub inverse: AlgebraElement,
    pub det_min: Option<f64>,
    pub trace_min: Option<f64>,
}

/// Drazin inverse via the per-fiber closed forms: full-rank fibers invert,
/// rank-one fibers F with tr F ≠ 0 map to F/(tr F)² (they satisfy
/// F² = (tr F)·F), nilpotent rank-one fibers and zero fibers map to zero.
pub fn drazin(element: &AlgebraElement, tol: &Tolerances) -> DrazinResult {
    let scale = element_scale(element);
    let profile = rank_profile(element, tol);
    let coeffs = map_coeffs(element, |z| {
        if coeff_is_zero(z, scale, tol) {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0, 0.0) / z
        }
    });
    let mut fibers = Vec::with_capacity(element.fibers().len());
    for (j, f) in element.fibers().iter().enumerate() {
        let phi = match profile.ranks[j] {
            2 => f.phi.inverse().expect("full-rank fiber"),
            1 if profile.delta11.contains(&j) => {
                let tr = f.phi.trace();
                f.phi.scale(C64::new(1.0, 0.0) / (tr * tr))
            }
            _ => Mat2::zero(),
        };
        fibers.push(Fiber::new(f.lambda, phi));
    }
    let inverse = AlgebraElement::new(element.decomposition().clone(), coeffs, fibers)
        .expect("Drazin inverse shares the element's shape");

    let nilpotent_present = profile
        .delta10
        .iter()
        .any(|&j| element.fibers()[j].phi.max_abs() > tol.rank_floor);
    let index = if is_invertible(element, tol) {
        0
    } else if nilpotent_present {
        2
    } else {
        1
    };

    let det_min = profile
        .delta2
        .iter()
        .map(|&j| element.fibers()[j].phi.det().norm())
        .fold(None, fold_min);
    let trace_min = profile
        .delta11
        .iter()
        .map(|&j| element.fibers()[j].phi.trace().norm())
        .fold(None, fold_min);

    DrazinResult {
        index,
        inverse,
        det_min,
        trace_min,
    }
}

fn fold_min(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(match acc {
        None => v,
        Some(a) => a.min(v),
    })
}

/// Three-valued verdict for the compatible-range property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorVerdict {
    True,
    False,
    Indeterminate,
}

/// Per-fiber reasons accompanying a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberCorStatus {
    Hermitian,
    SingularNotNormal,
    Fails,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct CorReport {
    pub verdict: CorVerdict,
    pub fibers: Vec<FiberCorStatus>,
}

/// Compatible-range criterion: all present coefficients real, and every
/// fiber either Hermitian or singular-but-not-normal. Margins within a
/// factor ten of a threshold yield Indeterminate instead of a boolean.
pub fn is_cor(element: &AlgebraElement, tol: &Tolerances) -> CorReport {
    let mut any_indeterminate = false;
    let mut any_fail = false;

    for (_, z) in element.coefficients().present() {
        let im = z.im.abs();
        if in_gray_zone(im, tol.cor) {
            any_indeterminate = true;
        } else if im > tol.cor {
            any_fail = true;
        }
    }

    let mut fibers = Vec::with_capacity(element.fibers().len());
    for f in element.fibers() {
        let m = &f.phi;
        let (s1, s2) = m.singular_values();
        let sf = s1.max(1.0);
        let herm_res = m.adjoint().add(&m.scale(C64::new(-1.0, 0.0))).max_abs();
        let herm_thresh = tol.cor * sf;
        let sing_thresh = tol.cor * sf;
        let comm = m
            .mul(&m.adjoint())
            .add(&m.adjoint().mul(m).scale(C64::new(-1.0, 0.0)))
            .max_abs();
        let comm_thresh = tol.cor * sf * sf;

        let singular = s2 <= sing_thresh;
        let status = if in_gray_zone(herm_res, herm_thresh) {
            FiberCorStatus::Indeterminate
        } else if herm_res <= herm_thresh {
            FiberCorStatus::Hermitian
        } else if in_gray_zone(s2, sing_thresh) || (singular && in_gray_zone(comm, comm_thresh)) {
            FiberCorStatus::Indeterminate
        } else if singular && comm > comm_thresh {
            FiberCorStatus::SingularNotNormal
        } else {
            FiberCorStatus::Fails
        };
        match status {
            FiberCorStatus::Fails => any_fail = true,
            FiberCorStatus::Indeterminate => any_indeterminate = true,
            _ => {}
        }
        fibers.push(status);
    }

    let verdict = if any_fail {
        CorVerdict::False
    } else if any_indeterminate {
        CorVerdict::Indeterminate
    } else {
        CorVerdict::True
    };
    CorReport { verdict, fibers }
}

fn map_coeffs(
    element: &AlgebraElement,
    f: impl Fn(C64) -> C64,
) -> super::element::Coefficients {
    let c = element.coefficients();
    super::element::Coefficients {
        a00: c.a00.map(&f),
        a01: c.a01.map(&f),
        a10: c.a10.map(&f),
        a11: c.a11.map(&f),
    }
}
