//! CLI acceptance: golden report stability, the exit-code contract, and
//! byte-exact determinism of the fixture generator.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halmos-kit"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn criterion_11_golden_report_for_fixture() {
    let out = run(&[
        "analyze",
        fixture("p2x2.json").to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let golden = std::fs::read(fixture("golden_analyze.json")).expect("golden exists");
    assert_eq!(
        out.stdout,
        golden,
        "report drifted from the golden file:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );

    // Schema sanity on the parsed document.
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["version"], "halmos-kit/1");
    assert_eq!(doc["dims"]["m"], 1);
    let h = doc["hValues"][0].as_f64().unwrap();
    assert!((h - 0.25).abs() < 1e-9);
    println!("ACCEPTANCE 11a golden report byte-stable: PASS");
}

#[test]
fn criterion_11_exit_code_contract() {
    // 1: unreadable and malformed inputs.
    let out = run(&["analyze", "/nonexistent/p.json", "/nonexistent/q.json"]);
    assert_eq!(code(&out), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = run(&[
        "analyze",
        bad.to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);

    // 2: validation failure names the violated invariant.
    let not_proj = dir.path().join("half.json");
    std::fs::write(
        &not_proj,
        r#"{"rows": 2, "cols": 2, "entries": [[0.5,0.0],[0.0,0.0],[0.0,0.0],[0.5,0.0]]}"#,
    )
    .unwrap();
    let out = run(&[
        "analyze",
        not_proj.to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("idempotent"), "diagnostic: {stderr}");

    let not_herm = dir.path().join("upper.json");
    std::fs::write(
        &not_herm,
        r#"{"rows": 2, "cols": 2, "entries": [[1.0,0.0],[1.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = run(&[
        "analyze",
        not_herm.to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Hermitian"));

    let small = dir.path().join("one.json");
    std::fs::write(&small, r#"{"rows": 1, "cols": 1, "entries": [[1.0,0.0]]}"#).unwrap();
    let out = run(&[
        "analyze",
        small.to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("size"));

    // 2: invalid random spec (h outside the open interval).
    let out = run(&[
        "random",
        "--dims",
        "0,0,0,0",
        "--h",
        "1.5",
        "--seed",
        "1",
        "--out",
        dir.path().join("gen").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    // 3: verification mismatch, forced by scaling the verify thresholds
    // far below the achievable floating-point deltas.
    let out = run(&[
        "analyze",
        fixture("p2x2.json").to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
        "--verify",
        "--verify-tol",
        "1e-12",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification mismatch"));
    // The report is still emitted in full on stdout.
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["oracle"].is_object());

    // 4: word syntax error with a column position.
    let out = run(&[
        "element",
        fixture("p2x2.json").to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
        "--word",
        "P**",
    ]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 3"));

    // Verification passes at default thresholds.
    let out = run(&[
        "verify",
        fixture("p2x2.json").to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    println!("ACCEPTANCE 11b exit code contract: PASS");
}

#[test]
fn criterion_11_random_determinism_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let r = run(&[
            "random",
            "--dims",
            "1,0,0,1",
            "--m",
            "2",
            "--h",
            "0.3,0.7",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&r), 0, "stderr: {}", String::from_utf8_lossy(&r.stderr));
    }
    for name in ["P.json", "Q.json", "ground_truth.json"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} must be byte-identical per seed");
    }

    // A different seed changes the output.
    let out_c = dir.path().join("c");
    let r = run(&[
        "random",
        "--dims",
        "1,0,0,1",
        "--h",
        "0.3,0.7",
        "--seed",
        "43",
        "--out",
        out_c.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    assert_ne!(
        std::fs::read(out_a.join("P.json")).unwrap(),
        std::fs::read(out_c.join("P.json")).unwrap()
    );

    // Analysis recovers the prescribed dims and H-spectrum.
    let out = run(&[
        "analyze",
        out_a.join("P.json").to_str().unwrap(),
        out_a.join("Q.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["dims"]["d00"], 1);
    assert_eq!(doc["dims"]["d01"], 0);
    assert_eq!(doc["dims"]["d10"], 0);
    assert_eq!(doc["dims"]["d11"], 1);
    assert_eq!(doc["dims"]["m"], 2);
    let h: Vec<f64> = doc["hValues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((h[0] - 0.3).abs() < 1e-8 && (h[1] - 0.7).abs() < 1e-8, "h = {h:?}");
    println!("ACCEPTANCE 11c generator determinism and round trip: PASS");
}

#[test]
fn element_answers_on_fixture() {
    // Kernel dimension of I − Q equals the rank of Q.
    let out = run(&[
        "element",
        fixture("p2x2.json").to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
        "--word",
        "I-Q",
        "--verify",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["results"]["kernelDim"], 1);

    // Spectrum of P − Q is ±√(1−h).
    let out = run(&[
        "element",
        fixture("p2x2.json").to_str().unwrap(),
        fixture("q2x2.json").to_str().unwrap(),
        "--word",
        "P-Q",
        "--ops",
        "spectrum,norm",
        "--verify",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let spec = doc["results"]["spectrum"].as_array().unwrap();
    let mut reals: Vec<f64> = spec.iter().map(|z| z[0].as_f64().unwrap()).collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let r = 0.75f64.sqrt();
    assert!((reals[0] + r).abs() < 1e-9 && (reals[1] - r).abs() < 1e-9);
    assert!(doc["results"]["norm"].as_f64().unwrap() - r < 1e-9);

    // Scalar literals parse. i·P has a singular yet normal fiber, which
    // breaks compatible range; i·P*Q stays singular-not-normal and keeps it.
    for (word, want) in [("i*P", "false"), ("i*P*Q", "true")] {
        let out = run(&[
            "element",
            fixture("p2x2.json").to_str().unwrap(),
            fixture("q2x2.json").to_str().unwrap(),
            "--word",
            word,
            "--ops",
            "cor",
            "--verify",
        ]);
        assert_eq!(code(&out), 0);
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["results"]["cor"], want, "word {word}");
    }
}

#[test]
fn halmos_tol_env_sets_default_scale() {
    // An absurd env scale tightens validation below machine precision;
    // the fixture Q then fails idempotency.
    let out = bin()
        .args([
            "analyze",
            fixture("p2x2.json").to_str().unwrap(),
            fixture("q2x2.json").to_str().unwrap(),
        ])
        .env("HALMOS_TOL", "1e-12")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 2);

    // An explicit --tol wins over the environment.
    let out = bin()
        .args([
            "analyze",
            fixture("p2x2.json").to_str().unwrap(),
            fixture("q2x2.json").to_str().unwrap(),
            "--tol",
            "1.0",
        ])
        .env("HALMOS_TOL", "1e-12")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0);

    let out = bin()
        .args([
            "analyze",
            fixture("p2x2.json").to_str().unwrap(),
            fixture("q2x2.json").to_str().unwrap(),
        ])
        .env("HALMOS_TOL", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 1);
}
