//! Independent brute-force reference implementations.
//!
//! Everything here works on raw matrices and shares nothing with the
//! formula-based modules beyond the dense kernels: spectra come from a
//! Hessenberg reduction with shifted QR iteration, pseudoinverses from
//! the SVD, Drazin inverses from the limit formula at the rank
//! stabilization index, the compatible-range check from its definition,
//! and the symmetry distance from a grid search over fiberwise rank-one
//! projections.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numerics::{
    hermitian_eig, null_basis, orthogonal_complement, orthonormal_columns, random_unitary,
    svd, CMatrix, NumericsError, SubspaceBasis, Tolerances,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Eigenvalue multiset of a general (non-Hermitian) complex matrix via
/// Hessenberg reduction and explicitly shifted QR iteration.
pub fn brute_spectrum(m: &CMatrix) -> Result<Vec<C64>, OracleError> {
    assert!(m.is_square(), "spectrum of a non-square matrix");
    let n = m.rows();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut a = hessenberg(m);
    let mut eigenvalues: Vec<C64> = Vec::with_capacity(n);
    let scale = a.max_abs().max(1e-300);
    let eps = 1e-15;

    let mut hi = n - 1;
    let mut iter_here = 0usize;
    let mut total_iter = 0usize;
    let max_total = 80 * n;
    loop {
        // Zero out negligible subdiagonals.
        for k in 1..=hi {
            let sub = a[(k, k - 1)].norm();
            let local = a[(k - 1, k - 1)].norm() + a[(k, k)].norm();
            if sub <= eps * local + 1e-300 * scale {
                a[(k, k - 1)] = C64::new(0.0, 0.0);
            }
        }
        // Find the active block [lo, hi].
        let mut lo = hi;
        while lo > 0 && a[(lo, lo - 1)].norm() > 0.0 {
            lo -= 1;
        }
        if lo == hi {
            eigenvalues.push(a[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter_here = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(a[(lo, lo)], a[(lo, hi)], a[(hi, lo)], a[(hi, hi)]);
            eigenvalues.push(l1);
            eigenvalues.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iter_here = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2, with an occasional
        // exceptional shift to break symmetry stalls.
        let shift = if iter_here > 0 && iter_here % 12 == 0 {
            a[(hi, hi)] + C64::new(0.75 * a[(hi, hi - 1)].norm() + 0.01 * scale, 0.0)
        } else {
            let (l1, l2) = eig2(
                a[(hi - 1, hi - 1)],
                a[(hi - 1, hi)],
                a[(hi, hi - 1)],
                a[(hi, hi)],
            );
            if (l1 - a[(hi, hi)]).norm() <= (l2 - a[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };
        qr_step(&mut a, lo, hi, shift);
        iter_here += 1;
        total_iter += 1;
        if total_iter > max_total {
            return Err(OracleError::NoConvergence);
        }
    }
    Ok(eigenvalues)
}

/// Householder reduction to upper Hessenberg form (similarity).
fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let mut x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x <= 1e-300 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        x[0] -= alpha;
        let vnorm_sqr: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr <= 1e-300 {
            continue;
        }
        let tau = 2.0 / vnorm_sqr;
        // A ← H A with H = I − τ v v* acting on rows k+1..n.
        for j in 0..n {
            let dot: C64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| v.conj() * a[(k + 1 + i, j)])
                .sum();
            let f = dot * tau;
            for (i, v) in x.iter().enumerate() {
                let val = a[(k + 1 + i, j)] - v * f;
                a[(k + 1 + i, j)] = val;
            }
        }
        // A ← A H on columns k+1..n.
        for i in 0..n {
            let dot: C64 = x
                .iter()
                .enumerate()
                .map(|(jj, v)| a[(i, k + 1 + jj)] * v)
                .sum();
            let f = dot * tau;
            for (jj, v) in x.iter().enumerate() {
                let val = a[(i, k + 1 + jj)] - f * v.conj();
                a[(i, k + 1 + jj)] = val;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
        a[(k + 1, k)] = alpha;
    }
    a
}

/// One explicit shifted QR sweep on the Hessenberg window [lo, hi].
fn qr_step(a: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        a[(i, i)] -= shift;
    }
    // Left Givens pass: zero the subdiagonal, remembering the rotations.
    let mut rotations: Vec<(C64, C64, f64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let p = a[(k, k)];
        let q = a[(k + 1, k)];
        let r = (p.norm_sqr() + q.norm_sqr()).sqrt();
        if r <= 1e-300 {
            rotations.push((C64::new(1.0, 0.0), C64::new(0.0, 0.0), 1.0));
            continue;
        }
        for j in k..=hi {
            let x = a[(k, j)];
            let y = a[(k + 1, j)];
            a[(k, j)] = (p.conj() * x + q.conj() * y) / r;
            a[(k + 1, j)] = (-q * x + p * y) / r;
        }
        rotations.push((p, q, r));
    }
    // Right pass: multiply by the adjoints in order.
    for (k, (p, q, r)) in rotations.iter().enumerate() {
        let k = lo + k;
        for i in lo..=(k + 1).min(hi) {
            let x = a[(i, k)];
            let y = a[(i, k + 1)];
            a[(i, k)] = (x * p + y * q) / r;
            a[(i, k + 1)] = (-x * q.conj() + y * p.conj()) / r;
        }
    }
    for i in lo..=hi {
        a[(i, i)] += shift;
    }
}

fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    ((tr + disc) * 0.5, (tr - disc) * 0.5)
}

/// SVD pseudoinverse with a relative rank cutoff.
pub fn brute_pinv(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix, OracleError> {
    let f = svd(m, tol)?;
    let cutoff = f.sigma_max() * (m.rows().max(m.cols()) as f64) * 1e-13;
    // X = V diag(1/σ) U* over the retained singular values.
    let mut x = CMatrix::zeros(m.cols(), m.rows());
    for k in 0..f.sigma.len() {
        if f.sigma[k] <= cutoff || f.sigma[k] == 0.0 {
            continue;
        }
        let inv = 1.0 / f.sigma[k];
        for i in 0..m.cols() {
            let vk = f.v[(i, k)];
            if vk.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..m.rows() {
                let val = x[(i, j)] + vk * inv * f.u[(j, k)].conj();
                x[(i, j)] = val;
            }
        }
    }
    Ok(x)
}

/// Drazin inverse by the core-nilpotent split: with k the rank
/// stabilization index (smallest j with rank A^j = rank A^{j+1}), the
/// space decomposes into im(A^k) ⊕ ker(A^k), both A-invariant; A is
/// invertible on the core and nilpotent on the rest, and A^D inverts the
/// core block and annihilates the kernel. High powers beyond A^k are
/// never formed, so small nonzero singular values survive. The candidate
/// is verified against the defining identities, bumping k when the rank
/// detection was fooled.
pub fn brute_drazin(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix, OracleError> {
    let n = m.rows();
    let f = svd(m, tol)?;
    let scale = f.sigma_max();
    if scale == 0.0 {
        return Ok(CMatrix::zeros(n, n));
    }
    let b = m.scale_re(1.0 / scale);

    let rank_of = |x: &CMatrix| -> Result<usize, OracleError> {
        let f = svd(x, tol)?;
        let cut = f.sigma_max() * (n as f64) * 1e-12;
        Ok(f.sigma.iter().filter(|&&s| s > cut && s > 0.0).count())
    };

    let mut k = 0usize;
    let mut power = CMatrix::identity(n);
    let mut rank_prev = n;
    loop {
        let next = &power * &b;
        let rank_next = rank_of(&next)?;
        if rank_next == rank_prev || k >= n {
            break;
        }
        power = next;
        rank_prev = rank_next;
        k += 1;
    }

    let mut best: Option<(f64, CMatrix)> = None;
    for k_try in k..=(k + 2).min(n.max(1)) {
        let x = drazin_from_split(&b, k_try, n, tol)?;
        let residual = drazin_residual(&b, &x, k_try.max(1));
        if residual <= 1e-10 * (1.0 + x.max_abs()) {
            return Ok(x.scale_re(1.0 / scale));
        }
        match &best {
            Some((r, _)) if *r <= residual => {}
            _ => best = Some((residual, x)),
        }
    }
    Ok(best.expect("at least one candidate").1.scale_re(1.0 / scale))
}

/// A^D from the splitting im(A^k) ⊕ ker(A^k).
fn drazin_from_split(
    b: &CMatrix,
    k: usize,
    n: usize,
    tol: &Tolerances,
) -> Result<CMatrix, OracleError> {
    if k == 0 {
        return brute_pinv(b, tol);
    }
    let mut ak = b.clone();
    for _ in 1..k {
        ak = &ak * b;
    }
    let f = svd(&ak, tol)?;
    let cut = f.sigma_max() * (n as f64) * 1e-12;
    let rank = f.sigma.iter().filter(|&&s| s > cut && s > 0.0).count();
    if rank == 0 {
        return Ok(CMatrix::zeros(n, n));
    }
    // Columns: core basis (range of A^k) then kernel basis of A^k.
    let mut s_cols: Vec<Vec<C64>> = (0..rank).map(|j| f.u.column(j)).collect();
    for j in 0..n {
        if f.sigma.get(j).copied().unwrap_or(0.0) <= cut {
            s_cols.push(f.v.column(j));
        }
    }
    let s = CMatrix::from_columns(&s_cols);
    let s_inv = brute_pinv(&s, tol)?;
    let t_mat = &(&s_inv * b) * &s;
    // Invert the leading core block.
    let core = CMatrix::from_fn(rank, rank, |i, j| t_mat[(i, j)]);
    let core_inv = brute_pinv(&core, tol)?;
    let mut block = CMatrix::zeros(n, n);
    for i in 0..rank {
        for j in 0..rank {
            block[(i, j)] = core_inv[(i, j)];
        }
    }
    Ok(&(&s * &block) * &s_inv)
}

fn drazin_residual(a: &CMatrix, x: &CMatrix, k: usize) -> f64 {
    let mut ak = CMatrix::identity(a.rows());
    for _ in 0..k {
        ak = &ak * a;
    }
    let r1 = (&(&(&ak * a) * x) - &ak).max_abs();
    let r2 = (&(&(x * a) * x) - x).max_abs();
    let r3 = (&(a * x) - &(x * a)).max_abs();
    r1.max(r2).max(r3)
}

/// Compatible-range check straight from the definition: M and M* must
/// agree on the orthogonal complement of Ker M + Ker M*.
pub fn brute_cor(m: &CMatrix, tol: &Tolerances) -> Result<bool, OracleError> {
    let n = m.rows();
    let scale = m.max_abs().max(1.0);
    let k1 = null_basis(m, tol.coeff_zero, tol)?;
    let k2 = null_basis(&m.adjoint(), tol.coeff_zero, tol)?;
    let mut union: Vec<Vec<C64>> = k1.columns().to_vec();
    union.extend(k2.columns().iter().cloned());
    let joined = orthonormal_columns(&union, 1e-8);
    let span = SubspaceBasis::new(n, joined, tol)?;
    let complement = orthogonal_complement(&span);
    if complement.is_empty() {
        return Ok(true);
    }
    let diff = m - &m.adjoint();
    let mut worst = 0.0f64;
    for col in complement.columns() {
        let image = diff.mul_vec(col);
        let norm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(norm);
    }
    Ok(worst <= 1e-8 * scale)
}

/// Fredholm index by eigenvalue counting on P − Q.
pub fn brute_index(p: &CMatrix, q: &CMatrix, tol: &Tolerances) -> Result<i64, OracleError> {
    let (values, _) = hermitian_eig(&(p - q).hermitized(), tol)?;
    let plus = values.iter().filter(|&&v| (v - 1.0).abs() <= tol.gap).count() as i64;
    let minus = values.iter().filter(|&&v| (v + 1.0).abs() <= tol.gap).count() as i64;
    Ok(plus - minus)
}

/// Distance from P to the projections orthogonal to their symmetry,
/// by exhaustive search.
///
/// The search space is assembled from raw matrices: each positive generic
/// eigenvector w of P − Q spans, together with (I−P−Q)w, a two-dimensional
/// reducing subspace; on it the admissible projections are the rank-one
/// ones annihilated by the symmetry form, a one-parameter circle. The
/// minimizer over the grid (with golden-section refinement) is assembled
/// globally and the reported value is the matrix norm ‖P − R‖.
pub fn brute_distance(
    p: &CMatrix,
    q: &CMatrix,
    grid: usize,
    tol: &Tolerances,
) -> Result<f64, OracleError> {
    assert!(grid >= 8);
    let n = p.rows();
    let id = CMatrix::identity(n);
    let a = (p - q).hermitized();
    let b = (&(&id - p) - q).hermitized();
    let u_op = &q.scale_re(2.0) - &id;

    let (values, vectors) = hermitian_eig(&a, tol)?;
    let mut r_total = CMatrix::zeros(n, n);
    for (i, &lambda) in values.iter().enumerate() {
        if lambda <= tol.gap || (lambda - 1.0).abs() <= tol.gap {
            continue;
        }
        let w = vectors.column(i);
        let bw = b.mul_vec(&w);
        let bw_norm = bw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if bw_norm <= tol.gap {
            continue;
        }
        let partner: Vec<C64> = bw.iter().map(|z| z / bw_norm).collect();
        let fiber = [w, partner];

        // 2x2 compressions of P and U on the fiber.
        let p2 = compress2(p, &fiber);
        let u2 = compress2(&u_op, &fiber);

        // Eigenvectors of the 2x2 involution U.
        let (e_plus, e_minus) = involution_eigvecs(&u2);

        let objective = |psi: f64| -> f64 {
            let phase = C64::new(psi.cos(), psi.sin());
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            let v = [
                (e_plus[0] + phase * e_minus[0]) * inv_sqrt2,
                (e_plus[1] + phase * e_minus[1]) * inv_sqrt2,
            ];
            // σ_max of P2 − v v*.
            let mut d = p2;
            for r in 0..2 {
                for c in 0..2 {
                    d[r][c] -= v[r] * v[c].conj();
                }
            }
            sigma_max2(&d)
        };

        let mut best_psi = 0.0f64;
        let mut best = f64::INFINITY;
        let step = 2.0 * std::f64::consts::PI / grid as f64;
        for g in 0..grid {
            let psi = g as f64 * step;
            let val = objective(psi);
            if val < best {
                best = val;
                best_psi = psi;
            }
        }
        let refined_psi = golden_section(&objective, best_psi - step, best_psi + step, 60);

        // Accumulate the minimizing rank-one projection in ambient space.
        let phase = C64::new(refined_psi.cos(), refined_psi.sin());
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let coeffs = [
            (e_plus[0] + phase * e_minus[0]) * inv_sqrt2,
            (e_plus[1] + phase * e_minus[1]) * inv_sqrt2,
        ];
        let ambient: Vec<C64> = (0..n)
            .map(|row| fiber[0][row] * coeffs[0] + fiber[1][row] * coeffs[1])
            .collect();
        for r in 0..n {
            for c in 0..n {
                let val = r_total[(r, c)] + ambient[r] * ambient[c].conj();
                r_total[(r, c)] = val;
            }
        }
    }

    let f = svd(&(p - &r_total), tol)?;
    Ok(f.sigma_max())
}

/// Best intertwining residual among seeded random unitary attempts;
/// certifies non-existence when it stays large.
pub fn brute_intertwiner_search(
    p: &CMatrix,
    q: &CMatrix,
    attempts: usize,
    seed: u64,
) -> f64 {
    let n = p.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..attempts {
        let u = random_unitary(n, &mut rng);
        let r1 = (&(&u * p) - &(q * &u)).max_abs();
        let r2 = (&(&u * q) - &(p * &u)).max_abs();
        best = best.min(r1.max(r2));
    }
    best
}

fn compress2(m: &CMatrix, fiber: &[Vec<C64>; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, br) in fiber.iter().enumerate() {
        let image_c0 = m.mul_vec(&fiber[0]);
        let image_c1 = m.mul_vec(&fiber[1]);
        out[r][0] = br.iter().zip(&image_c0).map(|(x, y)| x.conj() * y).sum();
        out[r][1] = br.iter().zip(&image_c1).map(|(x, y)| x.conj() * y).sum();
    }
    out
}

fn sigma_max2(m: &[[C64; 2]; 2]) -> f64 {
    let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let mid = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mid + disc).max(0.0).sqrt()
}

/// Eigenvectors of a Hermitian 2x2 involution at +1 and −1.
fn involution_eigvecs(u: &[[C64; 2]; 2]) -> ([C64; 2], [C64; 2]) {
    // (I + U)/2 projects onto the +1 eigenspace.
    let one = C64::new(1.0, 0.0);
    let plus = [
        [(u[0][0] + one) * 0.5, u[0][1] * 0.5],
        [u[1][0] * 0.5, (u[1][1] + one) * 0.5],
    ];
    let col = |m: &[[C64; 2]; 2], j: usize| [m[0][j], m[1][j]];
    let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let c0 = col(&plus, 0);
    let c1 = col(&plus, 1);
    let e_plus_raw = if norm(&c0) >= norm(&c1) { c0 } else { c1 };
    let np = norm(&e_plus_raw);
    let e_plus = [e_plus_raw[0] / np, e_plus_raw[1] / np];
    // The −1 eigenvector is orthogonal.
    let e_minus = [-e_plus[1].conj(), e_plus[0].conj()];
    (e_plus, e_minus)
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}
