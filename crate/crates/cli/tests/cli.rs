//! End-to-end tests of the `indefspec` binary: flags, exit codes, and
//! the stability of the output formats.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indefspec"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env("INDEFSPEC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("output file exists");
    serde_json::from_str(&text).expect("valid JSON")
}

#[test]
fn spectrum_default_json_schema() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["spectrum", "--n-max", "1", "--m-max", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("spectrum.json"));

    let manifest = &doc["manifest"];
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["timestamp"], "2023-11-14T22:13:20Z");
    assert!(manifest["config"]["residual_tol"].as_f64().unwrap() > 0.0);

    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 5);
    let ms: Vec<i64> = records.iter().map(|r| r["m"].as_i64().unwrap()).collect();
    assert_eq!(ms, vec![-2, -1, 0, 1, 2]);
    for r in records {
        assert_eq!(r["n"], 1);
        assert!(r["residual"].as_f64().unwrap() < 1e-12);
        assert!(r["delta"]["re"].as_f64().unwrap() == 0.0);
        let source = r["source"].as_str().unwrap();
        assert!(["bracketed", "symmetry"].contains(&source));
    }
    let zero = &records[2];
    assert_eq!(zero["lambda"]["re"].as_f64().unwrap(), 0.0);
    assert_eq!(zero["lambda"]["im"].as_f64().unwrap(), 0.0);
    // Reflection symmetry visible in the output.
    let lam_minus = records[0]["lambda"]["re"].as_f64().unwrap();
    let lam_plus = records[4]["lambda"]["re"].as_f64().unwrap();
    assert_eq!(lam_minus, -lam_plus);
}

#[test]
fn spectrum_m_max_zero_keeps_only_kernel_modes() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["spectrum", "--m-max", "0", "--n-max", "4"]);
    assert!(out.status.success());
    let doc = read_json(&dir.path().join("spectrum.json"));
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r["n"].as_i64().unwrap(), i as i64 + 1);
        assert_eq!(r["m"], 0);
        assert_eq!(r["lambda"]["re"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn spectrum_rejects_delta_outside_validated_disk() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["spectrum", "--delta-re", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("0.38"), "stderr: {stderr}");
    assert!(!dir.path().join("spectrum.json").exists());
}

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let args = [
        "spectrum",
        "--n-max",
        "2",
        "--m-max",
        "3",
        "--delta-re",
        "0.05",
        "--delta-im",
        "0.02",
        "--out",
        "a.json",
    ];
    assert!(run_in(dir.path(), &args).status.success());
    let mut args2 = args;
    args2[args.len() - 1] = "b.json";
    assert!(run_in(dir.path(), &args2).status.success());
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let mut b = std::fs::read(dir.path().join("b.json")).unwrap();
    // The only difference may be the output name embedded in the command.
    let b_text = String::from_utf8(b.clone())
        .unwrap()
        .replace("b.json", "a.json");
    b = b_text.into_bytes();
    assert_eq!(a, b, "reruns with identical flags must be byte-identical");
}

#[test]
fn spectrum_csv_format_with_sidecar_manifest() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "spectrum", "--n-max", "1", "--m-max", "1", "--format", "csv",
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,m,delta_re,delta_im,lambda_re,lambda_im,residual,source"
    );
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains('\r'), "LF endings only");
    let sidecar = read_json(&dir.path().join("spectrum.csv.manifest.json"));
    assert!(sidecar["manifest"]["command"]
        .as_str()
        .unwrap()
        .contains("csv"));
}

#[test]
fn modes_grid_sampling_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &["modes", "--n", "1", "--m", "0", "--grid", "21"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,re,im");
    assert_eq!(lines.len(), 1 + 21 * 21);

    // Dirichlet boundary: the first block is x = -1, all values zero.
    for line in &lines[1..22] {
        let fields: Vec<&str> = line.split(',').collect();
        let re: f64 = fields[2].parse().unwrap();
        let im: f64 = fields[3].parse().unwrap();
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12, "line {line}");
    }

    // The zero mode is the first kernel profile up to one global
    // constant: check sample ratios against sinh(pi(1-x)) sin(pi y).
    let value_at = |x_idx: usize, y_idx: usize| -> (f64, f64, f64, f64) {
        let fields: Vec<&str> = lines[1 + x_idx * 21 + y_idx].split(',').collect();
        (
            fields[0].parse().unwrap(),
            fields[1].parse().unwrap(),
            fields[2].parse().unwrap(),
            fields[3].parse().unwrap(),
        )
    };
    let pi = std::f64::consts::PI;
    let kernel = |x: f64, y: f64| {
        if x >= 0.0 {
            (pi * (1.0 - x)).sinh() * (pi * y).sin()
        } else {
            (pi * (1.0 + x)).sinh() * (pi * y).sin()
        }
    };
    let (x1, y1, re1, im1) = value_at(5, 10);
    let (x2, y2, re2, im2) = value_at(14, 7);
    let v1 = (re1 * re1 + im1 * im1).sqrt();
    let v2 = (re2 * re2 + im2 * im2).sqrt();
    let expected_ratio = (kernel(x1, y1) / kernel(x2, y2)).abs();
    assert!(
        ((v1 / v2) - expected_ratio).abs() < 1e-9 * expected_ratio,
        "profile ratio {} vs kernel ratio {}",
        v1 / v2,
        expected_ratio
    );

    let sidecar = read_json(&dir.path().join("modes.csv.manifest.json"));
    assert_eq!(sidecar["lambda"]["re"].as_f64().unwrap(), 0.0);
    assert!(sidecar["normalization"]["re"].as_f64().unwrap() > 0.0);
    assert_eq!(sidecar["grid"], 21);
}

#[test]
fn modes_complex_delta_has_imaginary_samples() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "modes",
            "--n",
            "1",
            "--m",
            "1",
            "--delta-im",
            "0.01",
            "--grid",
            "11",
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    let has_imag = text.lines().skip(1).any(|line| {
        let im: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        im.abs() > 1e-6
    });
    assert!(has_imag, "complex delta must produce complex samples");
}

#[test]
fn trace_epsilon_family_errors_decrease() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "trace",
            "--n",
            "1",
            "--m",
            "1",
            "--epsilon-sequence",
            "0.1,0.01,0.001",
        ],
    );
    assert!(out.status.success());
    let doc = read_json(&dir.path().join("trace.json"));
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    let errs: Vec<f64> = records
        .iter()
        .map(|r| r["error"].as_f64().unwrap())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    // Real family keeps real eigenvalues.
    for r in records {
        assert_eq!(r["lambda"]["im"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn trace_eta_family_errors_decrease() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "trace",
            "--n",
            "1",
            "--m",
            "1",
            "--eta-sequence",
            "0.1,0.01,0.001",
        ],
    );
    assert!(out.status.success());
    let doc = read_json(&dir.path().join("trace.json"));
    let records = doc["records"].as_array().unwrap();
    let errs: Vec<f64> = records
        .iter()
        .map(|r| r["error"].as_f64().unwrap())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    // Lossy family: complex deltas, complex eigenvalues.
    assert!(records[0]["delta"]["im"].as_f64().unwrap() > 0.0);
    assert!(records[0]["lambda"]["im"].as_f64().unwrap().abs() > 1e-6);
}

#[test]
fn trace_rejects_empty_and_missing_paths() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &["trace", "--n", "1", "--m", "1", "--delta-path", ""],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(dir.path(), &["trace", "--n", "1", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Mutually exclusive flags are a usage error too.
    let out = run_in(
        dir.path(),
        &[
            "trace",
            "--n",
            "1",
            "--m",
            "1",
            "--eta-sequence",
            "0.1",
            "--epsilon-sequence",
            "0.1",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_failures_exit_three_and_name_the_mode() {
    let dir = TempDir::new().unwrap();
    // An unreachable residual tolerance makes the seed unusable.
    let out = run_in(
        dir.path(),
        &[
            "modes",
            "--n",
            "1",
            "--m",
            "1",
            "--delta-re",
            "0.1",
            "--residual-tol",
            "1e-30",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("(n=1, m=1)"), "stderr: {stderr}");
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("solver.cfg"),
        "# tighter continuation\ncontinuation_steps = 8\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "spectrum",
            "--n-max",
            "1",
            "--m-max",
            "1",
            "--config",
            "solver.cfg",
        ],
    );
    assert!(out.status.success());
    let doc = read_json(&dir.path().join("spectrum.json"));
    assert_eq!(doc["manifest"]["config"]["continuation_steps"], 8);

    let out = run_in(
        dir.path(),
        &[
            "spectrum",
            "--n-max",
            "1",
            "--m-max",
            "1",
            "--config",
            "solver.cfg",
            "--continuation-steps",
            "16",
        ],
    );
    assert!(out.status.success());
    let doc = read_json(&dir.path().join("spectrum.json"));
    assert_eq!(doc["manifest"]["config"]["continuation_steps"], 16);

    std::fs::write(dir.path().join("bad.cfg"), "no_such_key = 1\n").unwrap();
    let out = run_in(
        dir.path(),
        &["spectrum", "--n-max", "1", "--config", "bad.cfg"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_quick_passes_and_reports() {
    let dir = TempDir::new().unwrap();
    let start = std::time::Instant::now();
    let out = run_in(dir.path(), &["validate", "--level", "quick"]);
    let elapsed = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "stdout:\n{stdout}");
    assert!(elapsed < 60.0, "quick validate took {elapsed:.1}s");
    assert!(stdout.contains("0.32 reference constant"));
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 14);

    let doc = read_json(&dir.path().join("validate-report.json"));
    assert_eq!(doc["passed"], true);
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert!(checks
        .iter()
        .any(|c| c["name"] == "0.32 reference constant"));
}
