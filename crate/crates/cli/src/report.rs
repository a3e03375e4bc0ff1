//! JSON report assembly, including the oracle deltas of verify mode.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use halmos_kit::algebra::{
    drazin, is_cor, kernel_basis, moore_penrose, operator_norm, spectrum, AlgebraElement,
    CorVerdict,
};
use halmos_kit::canonical::{reconstruct, HalmosDecomposition, ProjectionPair};
use halmos_kit::numerics::{null_basis, svd, C64, CMatrix, Tolerances};
use halmos_kit::oracle::{
    brute_cor, brute_distance, brute_drazin, brute_index, brute_intertwiner_search, brute_pinv,
    brute_spectrum,
};
use halmos_kit::pairs::{
    build_intertwiner, intertwining_residuals, report as pair_report, DistanceRegime,
    IntertwinerParams, PairReport,
};

pub const REPORT_VERSION: &str = "halmos-kit/1";

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub version: String,
    pub validation: ValidationSection,
    pub dims: DimsSection,
    pub h_values: Vec<f64>,
    pub diff_spectrum: Vec<f64>,
    pub anticommutator: AnticommutatorSection,
    pub index: i64,
    pub h_min: Option<f64>,
    pub trace_powers: BTreeMap<String, f64>,
    pub distance: DistanceSection,
    pub intertwiner: IntertwinerSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<BTreeMap<String, f64>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationSection {
    pub ok: bool,
    pub size: usize,
    pub hermitian_residual_p: f64,
    pub hermitian_residual_q: f64,
    pub idempotent_residual_p: f64,
    pub idempotent_residual_q: f64,
}

#[derive(Serialize)]
pub struct DimsSection {
    pub d00: usize,
    pub d01: usize,
    pub d10: usize,
    pub d11: usize,
    pub m: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnticommutatorSection {
    pub spectrum: Vec<f64>,
    pub norm: f64,
    pub pq_norm: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DistanceSection {
    pub x: f64,
    pub value: f64,
    pub regime: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntertwinerSection {
    pub exists: bool,
    pub residuals: Option<ResidualsSection>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualsSection {
    pub unitarity: f64,
    pub intertwine_p: f64,
    pub intertwine_q: f64,
}

pub struct VerifyOutcome {
    pub deltas: BTreeMap<String, f64>,
    pub failures: Vec<String>,
}

/// Assembles the analyze report; with `verify`, every formula item gets
/// its oracle delta and threshold check.
pub fn build_analyze_report(
    pair: &ProjectionPair,
    dec: &HalmosDecomposition,
    tol: &Tolerances,
    verify: bool,
    verify_scale: f64,
) -> Result<(Report, Vec<String>), String> {
    let pr: PairReport = pair_report(dec, tol);
    let n = pair.dim();

    let residuals = if pr.intertwiner_exists {
        let u = build_intertwiner(dec, &IntertwinerParams::default(), tol)
            .map_err(|e| e.to_string())?;
        let (ur, r1, r2) = intertwining_residuals(&u, pair.p(), pair.q());
        Some(ResidualsSection {
            unitarity: ur,
            intertwine_p: r1,
            intertwine_q: r2,
        })
    } else {
        None
    };

    let mut report = Report {
        version: REPORT_VERSION.to_string(),
        validation: ValidationSection {
            ok: true,
            size: n,
            hermitian_residual_p: pair.p().hermitian_residual(),
            hermitian_residual_q: pair.q().hermitian_residual(),
            idempotent_residual_p: (&(pair.p() * pair.p()) - pair.p()).max_abs(),
            idempotent_residual_q: (&(pair.q() * pair.q()) - pair.q()).max_abs(),
        },
        dims: DimsSection {
            d00: pr.dims.d00,
            d01: pr.dims.d01,
            d10: pr.dims.d10,
            d11: pr.dims.d11,
            m: pr.dims.m,
        },
        h_values: pr.h_values.clone(),
        diff_spectrum: pr.diff_spectrum.clone(),
        anticommutator: AnticommutatorSection {
            spectrum: pr.anticomm_spectrum.clone(),
            norm: pr.anticomm_norm,
            pq_norm: pr.pq_norm,
        },
        index: pr.fredholm_index,
        h_min: pr.h_min,
        trace_powers: pr
            .trace_powers
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        distance: DistanceSection {
            x: pr.distance.x,
            value: pr.distance.value,
            regime: match pr.distance.regime {
                DistanceRegime::Generic => "generic".to_string(),
                DistanceRegime::Degenerate => "degenerate".to_string(),
            },
        },
        intertwiner: IntertwinerSection {
            exists: pr.intertwiner_exists,
            residuals,
        },
        oracle: None,
    };

    let mut failures = Vec::new();
    if verify {
        let outcome = verify_pair(pair, dec, &pr, tol, verify_scale)?;
        failures = outcome.failures;
        report.oracle = Some(outcome.deltas);
    }
    Ok((report, failures))
}

fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    let one_way = |x: &[f64], y: &[f64]| {
        x.iter()
            .map(|v| {
                y.iter()
                    .map(|w| (v - w).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    one_way(a, b).max(one_way(b, a))
}

fn verify_pair(
    pair: &ProjectionPair,
    dec: &HalmosDecomposition,
    pr: &PairReport,
    tol: &Tolerances,
    scale: f64,
) -> Result<VerifyOutcome, String> {
    let mut deltas = BTreeMap::new();
    let mut failures = Vec::new();
    let n = pair.dim() as f64;
    let mut check = |name: &str, delta: f64, bound: f64, failures: &mut Vec<String>| {
        deltas.insert(name.to_string(), delta);
        if delta > bound * scale {
            failures.push(format!(
                "{name}: delta {delta:.3e} exceeds {:.3e}",
                bound * scale
            ));
        }
    };

    let rec = reconstruct(dec);
    let recon_delta = (rec.p() - pair.p())
        .max_abs()
        .max((rec.q() - pair.q()).max_abs());
    check("reconstruction", recon_delta, tol.reconstruction * n, &mut failures);

    let brute_diff: Vec<f64> = brute_spectrum(&pair.difference())
        .map_err(|e| e.to_string())?
        .iter()
        .map(|z| z.re)
        .collect();
    check(
        "diffSpectrum",
        hausdorff(&pr.diff_spectrum, &brute_diff),
        tol.set_match,
        &mut failures,
    );

    let pq = pair.p() * pair.q();
    let anti = &pq + &pq.adjoint();
    let pq_norm = svd(&pq, tol).map_err(|e| e.to_string())?.sigma_max();
    let anti_norm = svd(&anti, tol).map_err(|e| e.to_string())?.sigma_max();
    check(
        "pqNorm",
        (pr.pq_norm - pq_norm).abs(),
        1e-9,
        &mut failures,
    );
    check(
        "anticommutatorNorm",
        (pr.anticomm_norm - anti_norm).abs(),
        1e-9,
        &mut failures,
    );
    check(
        "waltersIdentity",
        (anti_norm - (pq_norm * pq_norm + pq_norm)).abs(),
        1e-9,
        &mut failures,
    );
    let brute_anti: Vec<f64> = brute_spectrum(&anti)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|z| z.re)
        .collect();
    check(
        "anticommutatorSpectrum",
        hausdorff(&pr.anticomm_spectrum, &brute_anti),
        tol.set_match,
        &mut failures,
    );

    let oracle_index = brute_index(pair.p(), pair.q(), tol).map_err(|e| e.to_string())?;
    check(
        "index",
        (pr.fredholm_index - oracle_index).abs() as f64,
        0.0,
        &mut failures,
    );

    let a = pair.difference();
    let mut power = CMatrix::identity(pair.dim());
    let mut trace_delta = 0.0f64;
    for k in 1u32..=8 {
        power = &power * &a;
        let formula = halmos_kit::pairs::trace_power_diff(dec, k);
        trace_delta = trace_delta.max((formula - power.trace().re).abs());
    }
    check("tracePowers", trace_delta, 1e-8, &mut failures);

    let brute_dist =
        brute_distance(pair.p(), pair.q(), 1000, tol).map_err(|e| e.to_string())?;
    check(
        "distance",
        (pr.distance.value - brute_dist).abs(),
        tol.distance_search,
        &mut failures,
    );

    if pr.intertwiner_exists {
        let u = build_intertwiner(dec, &IntertwinerParams::default(), tol)
            .map_err(|e| e.to_string())?;
        let (ur, r1, r2) = intertwining_residuals(&u, pair.p(), pair.q());
        check(
            "intertwinerResidual",
            ur.max(r1).max(r2),
            tol.inverse_identity * n,
            &mut failures,
        );
    } else {
        let best = brute_intertwiner_search(pair.p(), pair.q(), 50, 0x0A11CE);
        deltas.insert("intertwinerSearchResidual".to_string(), best);
        if best <= 1e-3 {
            failures.push(format!(
                "intertwinerSearchResidual: a random unitary nearly intertwines ({best:.3e}) although dims differ"
            ));
        }
    }

    Ok(VerifyOutcome { deltas, failures })
}

// ---------------------------------------------------------------------
// Element reports
// ---------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ElementReport {
    pub version: String,
    pub word: String,
    pub dims: DimsSection,
    pub h_values: Vec<f64>,
    pub element: ElementData,
    pub results: ElementResults,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<BTreeMap<String, f64>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ElementData {
    pub coefficients: BTreeMap<String, Option<[f64; 2]>>,
    pub fibers: Vec<FiberData>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberData {
    pub lambda: f64,
    pub matrix: [[f64; 2]; 4],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ElementResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pinv: Option<InverseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drazin: Option<DrazinSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cor: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InverseSection {
    pub identity_residual: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DrazinSection {
    pub index: u8,
    pub identity_residual: f64,
    pub det_min: Option<f64>,
    pub trace_min: Option<f64>,
}

/// Which element questions to answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOp {
    Spectrum,
    Norm,
    Kernel,
    Pinv,
    Drazin,
    Cor,
}

impl ElementOp {
    pub fn parse_list(s: &str) -> Result<Vec<ElementOp>, String> {
        if s == "all" {
            return Ok(vec![
                ElementOp::Spectrum,
                ElementOp::Norm,
                ElementOp::Kernel,
                ElementOp::Pinv,
                ElementOp::Drazin,
                ElementOp::Cor,
            ]);
        }
        s.split(',')
            .map(|item| match item.trim() {
                "spectrum" => Ok(ElementOp::Spectrum),
                "norm" => Ok(ElementOp::Norm),
                "kernel" => Ok(ElementOp::Kernel),
                "pinv" => Ok(ElementOp::Pinv),
                "drazin" => Ok(ElementOp::Drazin),
                "cor" => Ok(ElementOp::Cor),
                other => Err(format!("unknown op '{other}'")),
            })
            .collect()
    }
}

pub fn build_element_report(
    word: &str,
    element: &AlgebraElement,
    dec: &Arc<HalmosDecomposition>,
    ops: &[ElementOp],
    tol: &Tolerances,
    verify: bool,
    verify_scale: f64,
) -> Result<(ElementReport, Vec<String>), String> {
    let dims = dec.dims();
    let c2a = |z: Option<C64>| z.map(|z| [z.re, z.im]);
    let mut coefficients = BTreeMap::new();
    coefficients.insert("a00".to_string(), c2a(element.coefficients().a00));
    coefficients.insert("a01".to_string(), c2a(element.coefficients().a01));
    coefficients.insert("a10".to_string(), c2a(element.coefficients().a10));
    coefficients.insert("a11".to_string(), c2a(element.coefficients().a11));
    let fibers = element
        .fibers()
        .iter()
        .map(|f| FiberData {
            lambda: f.lambda,
            matrix: [
                [f.phi.e[0][0].re, f.phi.e[0][0].im],
                [f.phi.e[0][1].re, f.phi.e[0][1].im],
                [f.phi.e[1][0].re, f.phi.e[1][0].im],
                [f.phi.e[1][1].re, f.phi.e[1][1].im],
            ],
        })
        .collect();

    let mut results = ElementResults {
        spectrum: None,
        norm: None,
        kernel_dim: None,
        pinv: None,
        drazin: None,
        cor: None,
    };
    let mut deltas: BTreeMap<String, f64> = BTreeMap::new();
    let mut failures: Vec<String> = Vec::new();
    let assembled = element.assemble();
    let nf = assembled.rows() as f64;

    for op in ops {
        match op {
            ElementOp::Spectrum => {
                let s = spectrum(element, tol);
                results.spectrum = Some(s.iter().map(|z| [z.re, z.im]).collect());
                if verify {
                    let brute = brute_spectrum(&assembled).map_err(|e| e.to_string())?;
                    let delta = hausdorff_c(&s, &brute);
                    deltas.insert("spectrum".into(), delta);
                    if delta > 1e-7 * verify_scale {
                        failures.push(format!("spectrum: delta {delta:.3e}"));
                    }
                }
            }
            ElementOp::Norm => {
                let n = operator_norm(element);
                results.norm = Some(n);
                if verify {
                    let brute = svd(&assembled, tol).map_err(|e| e.to_string())?.sigma_max();
                    let delta = (n - brute).abs();
                    deltas.insert("norm".into(), delta);
                    if delta > 1e-9 * (1.0 + brute) * verify_scale {
                        failures.push(format!("norm: delta {delta:.3e}"));
                    }
                }
            }
            ElementOp::Kernel => {
                let k = kernel_basis(element, tol);
                results.kernel_dim = Some(k.dim());
                if verify {
                    let oracle =
                        null_basis(&assembled, 1e-9, tol).map_err(|e| e.to_string())?;
                    let dim_delta = (k.dim() as f64 - oracle.dim() as f64).abs();
                    let angle = k
                        .max_principal_angle(&oracle, tol)
                        .map_err(|e| e.to_string())?;
                    deltas.insert("kernelDim".into(), dim_delta);
                    deltas.insert("kernelAngle".into(), angle);
                    if dim_delta > 0.0 || angle > tol.kernel_angle * verify_scale {
                        failures.push(format!(
                            "kernel: dim delta {dim_delta}, angle {angle:.3e}"
                        ));
                    }
                }
            }
            ElementOp::Pinv => {
                let pinv = moore_penrose(element, tol).assemble();
                let res = mp_residual(&assembled, &pinv);
                results.pinv = Some(InverseSection {
                    identity_residual: res,
                });
                if verify {
                    let oracle = brute_pinv(&assembled, tol).map_err(|e| e.to_string())?;
                    let delta = (&pinv - &oracle).max_abs();
                    deltas.insert("pinv".into(), delta);
                    if res > tol.inverse_identity * nf * verify_scale {
                        failures.push(format!("pinv identities: {res:.3e}"));
                    }
                    if delta > 1e-6 * verify_scale {
                        failures.push(format!("pinv oracle delta: {delta:.3e}"));
                    }
                }
            }
            ElementOp::Drazin => {
                let d = drazin(element, tol);
                let x = d.inverse.assemble();
                let res = drazin_residual_of(&assembled, &x, d.index.max(1) as usize);
                results.drazin = Some(DrazinSection {
                    index: d.index,
                    identity_residual: res,
                    det_min: d.det_min,
                    trace_min: d.trace_min,
                });
                if verify {
                    let oracle = brute_drazin(&assembled, tol).map_err(|e| e.to_string())?;
                    let delta = (&x - &oracle).max_abs();
                    deltas.insert("drazin".into(), delta);
                    if res > tol.inverse_identity * nf * verify_scale {
                        failures.push(format!("drazin identities: {res:.3e}"));
                    }
                    if delta > tol.drazin_agree * verify_scale {
                        failures.push(format!("drazin oracle delta: {delta:.3e}"));
                    }
                }
            }
            ElementOp::Cor => {
                let verdict = is_cor(element, tol);
                results.cor = Some(
                    match verdict.verdict {
                        CorVerdict::True => "true",
                        CorVerdict::False => "false",
                        CorVerdict::Indeterminate => "indeterminate",
                    }
                    .to_string(),
                );
                if verify && verdict.verdict != CorVerdict::Indeterminate {
                    let brute = brute_cor(&assembled, tol).map_err(|e| e.to_string())?;
                    let agree = (verdict.verdict == CorVerdict::True) == brute;
                    deltas.insert("cor".into(), if agree { 0.0 } else { 1.0 });
                    if !agree {
                        failures.push("cor: fiber verdict disagrees with oracle".into());
                    }
                }
            }
        }
    }

    let report = ElementReport {
        version: REPORT_VERSION.to_string(),
        word: word.to_string(),
        dims: DimsSection {
            d00: dims.d00,
            d01: dims.d01,
            d10: dims.d10,
            d11: dims.d11,
            m: dims.m,
        },
        h_values: dec.h_values().to_vec(),
        element: ElementData {
            coefficients,
            fibers,
        },
        results,
        oracle: verify.then_some(deltas),
    };
    Ok((report, failures))
}

fn hausdorff_c(a: &[C64], b: &[C64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|v| y.iter().map(|w| (v - w).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn mp_residual(a: &CMatrix, x: &CMatrix) -> f64 {
    let r1 = (&(&(a * x) * a) - a).max_abs();
    let r2 = (&(&(x * a) * x) - x).max_abs();
    let r3 = (a * x).hermitian_residual();
    let r4 = (x * a).hermitian_residual();
    r1.max(r2).max(r3).max(r4)
}

fn drazin_residual_of(a: &CMatrix, x: &CMatrix, k: usize) -> f64 {
    let mut ak = CMatrix::identity(a.rows());
    for _ in 0..k {
        ak = &ak * a;
    }
    let r1 = (&(&(&ak * a) * x) - &ak).max_abs();
    let r2 = (&(&(x * a) * x) - x).max_abs();
    let r3 = (&(a * x) - &(x * a)).max_abs();
    r1.max(r2).max(r3)
}
