//! Command-line front end: read matrix pairs, emit structured analysis
//! reports, generate fixtures, run verification.
//!
//! Exit codes: 0 success, 1 parse/IO error, 2 validation failure,
//! 3 verification mismatch, 4 word syntax error.

mod matfile;
mod report;
mod word;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use halmos_kit::canonical::{
    generate_pair, halmos_decompose, validate_pair, RandomPairSpec,
};
use halmos_kit::numerics::Tolerances;

use matfile::{load_matrix, save_matrix};
use report::{build_analyze_report, build_element_report, ElementOp};
use word::evaluate_word;

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_WORD: u8 = 4;

#[derive(Parser)]
#[command(
    name = "halmos-kit",
    about = "Analyze a pair of orthogonal projections through its canonical decomposition",
    long_about = "Analyze a pair of orthogonal projections through its canonical \
decomposition.\n\nMatrices are JSON documents {\"rows\": R, \"cols\": C, \"entries\": \
[[re, im], ...]} in row-major order. Reports are JSON on stdout; diagnostics go to \
stderr.\n\nDefault tolerance family (scaled by --tol): input hermitian 1e-10, \
idempotent 1e-9, eigenvalue clustering 1e-8, reconstruction 1e-8, spectra set \
matching 1e-8, norm identities 1e-9, kernel principal angles 1e-7, inverse \
identities 1e-8, distance search 1e-4. The HALMOS_TOL environment variable sets \
the default for --tol."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Scale factor applied to the whole default tolerance family.
    #[arg(long)]
    tol: Option<f64>,
    /// Extra scale applied only to verification thresholds.
    #[arg(long, default_value_t = 1.0)]
    verify_tol: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Result<Tolerances, String> {
        let base = Tolerances::default();
        let factor = match self.tol {
            Some(f) => f,
            None => match std::env::var("HALMOS_TOL") {
                Ok(v) => v
                    .parse::<f64>()
                    .map_err(|_| format!("HALMOS_TOL is not a number: {v}"))?,
                Err(_) => 1.0,
            },
        };
        if !(factor.is_finite() && factor > 0.0) {
            return Err(format!("tolerance scale must be positive, got {factor}"));
        }
        Ok(base.scaled(factor))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a pair and answer the standard questions.
    Analyze {
        path_p: PathBuf,
        path_q: PathBuf,
        /// Attach oracle deltas to every formula item; exit 3 on mismatch.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Alias for `analyze --verify`.
    Verify {
        path_p: PathBuf,
        path_q: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Evaluate a word in the generated algebra and answer the
    /// per-element questions.
    Element {
        path_p: PathBuf,
        path_q: PathBuf,
        /// Word over P, Q, I with + - * and complex literals (e.g. "P*Q-0.5i*I").
        #[arg(long)]
        word: String,
        /// Comma-separated subset of spectrum,norm,kernel,pinv,drazin,cor.
        #[arg(long, default_value = "all")]
        ops: String,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Synthesize a seeded pair with prescribed dimensions and H-spectrum.
    Random {
        /// Dimensions d00,d01,d10,d11 of the four intersection blocks.
        #[arg(long, default_value = "0,0,0,0")]
        dims: String,
        /// Number of generic fibers; must match the --h list when given.
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated eigenvalues of H, each strictly inside (0,1).
        #[arg(long, default_value = "")]
        h: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for P.json, Q.json, ground_truth.json.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            path_p,
            path_q,
            verify,
            tol,
        } => cmd_analyze(&path_p, &path_q, verify, &tol),
        Command::Verify { path_p, path_q, tol } => cmd_analyze(&path_p, &path_q, true, &tol),
        Command::Element {
            path_p,
            path_q,
            word,
            ops,
            verify,
            tol,
        } => cmd_element(&path_p, &path_q, &word, &ops, verify, &tol),
        Command::Random {
            dims,
            m,
            h,
            seed,
            out,
            tol,
        } => cmd_random(&dims, m, &h, seed, &out, &tol),
    };
    match result {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<ExitCode, (u8, String)>;

fn cmd_analyze(path_p: &PathBuf, path_q: &PathBuf, verify: bool, tol_args: &TolArgs) -> CmdResult {
    let tol = tol_args.tolerances().map_err(|e| (EXIT_IO, e))?;
    let p = load_matrix(path_p).map_err(|e| (EXIT_IO, e))?;
    let q = load_matrix(path_q).map_err(|e| (EXIT_IO, e))?;
    let pair = validate_pair(&p, &q, &tol).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
    let dec = halmos_decompose(&pair, &tol).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
    let (report, failures) =
        build_analyze_report(&pair, &dec, &tol, verify, tol_args.verify_tol)
            .map_err(|e| (EXIT_VALIDATION, e))?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &failures {
            eprintln!("verification mismatch: {f}");
        }
        Ok(ExitCode::from(EXIT_VERIFY))
    }
}

fn cmd_element(
    path_p: &PathBuf,
    path_q: &PathBuf,
    word: &str,
    ops: &str,
    verify: bool,
    tol_args: &TolArgs,
) -> CmdResult {
    let tol = tol_args.tolerances().map_err(|e| (EXIT_IO, e))?;
    let ops = ElementOp::parse_list(ops).map_err(|e| (EXIT_IO, e))?;
    let p = load_matrix(path_p).map_err(|e| (EXIT_IO, e))?;
    let q = load_matrix(path_q).map_err(|e| (EXIT_IO, e))?;
    let pair = validate_pair(&p, &q, &tol).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
    let dec = Arc::new(
        halmos_decompose(&pair, &tol).map_err(|e| (EXIT_VALIDATION, e.to_string()))?,
    );
    let element = evaluate_word(word, &dec)
        .map_err(|e| (EXIT_WORD, format!("word syntax error at {e}")))?;
    let (report, failures) =
        build_element_report(word, &element, &dec, &ops, &tol, verify, tol_args.verify_tol)
            .map_err(|e| (EXIT_VALIDATION, e))?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &failures {
            eprintln!("verification mismatch: {f}");
        }
        Ok(ExitCode::from(EXIT_VERIFY))
    }
}

fn cmd_random(
    dims: &str,
    m: Option<usize>,
    h: &str,
    seed: u64,
    out: &PathBuf,
    tol_args: &TolArgs,
) -> CmdResult {
    let tol = tol_args.tolerances().map_err(|e| (EXIT_IO, e))?;
    let parts: Vec<usize> = dims
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| (EXIT_VALIDATION, format!("invalid --dims: {e}")))?;
    if parts.len() != 4 {
        return Err((
            EXIT_VALIDATION,
            format!("--dims needs four comma-separated counts, got {}", parts.len()),
        ));
    }
    let h_values: Vec<f64> = if h.trim().is_empty() {
        Vec::new()
    } else {
        h.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| (EXIT_VALIDATION, format!("invalid --h: {e}")))?
    };
    if let Some(m) = m {
        if m != h_values.len() {
            return Err((
                EXIT_VALIDATION,
                format!("--m {} does not match {} values in --h", m, h_values.len()),
            ));
        }
    }
    let spec = RandomPairSpec {
        d00: parts[0],
        d01: parts[1],
        d10: parts[2],
        d11: parts[3],
        h_values,
        seed,
    };
    let (pair, truth) =
        generate_pair(&spec, &tol).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;

    std::fs::create_dir_all(out)
        .map_err(|e| (EXIT_IO, format!("cannot create {}: {e}", out.display())))?;
    save_matrix(&out.join("P.json"), pair.p()).map_err(|e| (EXIT_IO, e))?;
    save_matrix(&out.join("Q.json"), pair.q()).map_err(|e| (EXIT_IO, e))?;

    #[derive(serde::Serialize)]
    #[serde(rename_all = "camelCase")]
    struct GroundTruth {
        version: String,
        dims: report::DimsSection,
        h_values: Vec<f64>,
        seed: u64,
    }
    let gt = GroundTruth {
        version: report::REPORT_VERSION.to_string(),
        dims: report::DimsSection {
            d00: truth.dims().d00,
            d01: truth.dims().d01,
            d10: truth.dims().d10,
            d11: truth.dims().d11,
            m: truth.dims().m,
        },
        h_values: truth.h_values().to_vec(),
        seed,
    };
    let text = serde_json::to_string_pretty(&gt).expect("serializable");
    std::fs::write(out.join("ground_truth.json"), text + "\n")
        .map_err(|e| (EXIT_IO, format!("cannot write ground truth: {e}")))?;
    eprintln!("wrote P.json, Q.json, ground_truth.json to {}", out.display());
    Ok(ExitCode::SUCCESS)
}
