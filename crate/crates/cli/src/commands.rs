//! The four subcommands: spectrum, modes, trace, validate.

use crate::manifest::RunManifest;
use crate::output::{csv_row, fmt_f64, json_complex, json_string};
use indefspec_core::modes::ModeSpec;
use indefspec_core::secular::DELTA_VALIDATED_RADIUS;
use indefspec_core::spectrum::{
    continue_to_delta, convergence_study, solve_unperturbed, Eigenvalue, ModeIndex,
};
use indefspec_core::validate::{run_suite, Level};
use indefspec_core::{Complex64, SolverConfig, TransverseIndex};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

/// Exit-code contract: 0 ok, 1 validation failure, 2 usage, 3 solver or
/// I/O failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Solver(m) | CliError::Io(m) => m,
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Upfront check shared by every delta-taking command.
fn check_delta_flag(delta: Complex64) -> Result<(), CliError> {
    let norm = delta.norm();
    if norm > DELTA_VALIDATED_RADIUS {
        return Err(CliError::Usage(format!(
            "|delta| = {norm:.4} exceeds the validated radius {DELTA_VALIDATED_RADIUS}"
        )));
    }
    Ok(())
}

fn record_json(ev: &Eigenvalue) -> String {
    format!(
        "{{\"n\":{},\"m\":{},\"delta\":{},\"lambda\":{},\"residual\":{},\"source\":{}}}",
        ev.index.n,
        ev.index.m,
        json_complex(ev.delta),
        json_complex(ev.value),
        fmt_f64(ev.residual),
        json_string(&ev.source.to_string()),
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

pub fn cmd_spectrum(
    n_max: u32,
    m_max: u32,
    delta: Complex64,
    format: OutputFormat,
    out: &Path,
    config: &SolverConfig,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    check_delta_flag(delta)?;

    // Independent per-n solves; deterministic merge by (n, m).
    let mut records: Vec<Eigenvalue> = (1..=n_max)
        .into_par_iter()
        .map(|nn| -> Result<Vec<Eigenvalue>, CliError> {
            let n = TransverseIndex::new(nn);
            let seeds = solve_unperturbed(n, m_max, config)
                .map_err(|e| CliError::Solver(format!("solving (n={nn}): {e}")))?;
            if delta == Complex64::new(0.0, 0.0) {
                return Ok(seeds);
            }
            seeds
                .iter()
                .map(|seed| {
                    continue_to_delta(seed, delta, config.continuation_steps as u32, config)
                        .map_err(|e| {
                            CliError::Solver(format!(
                                "continuation failed at (n={}, m={}): {e}",
                                seed.index.n, seed.index.m
                            ))
                        })
                })
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    records.sort_by_key(|ev| (ev.index.n, ev.index.m));

    match format {
        OutputFormat::Json => {
            let body: Vec<String> = records.iter().map(record_json).collect();
            let doc = format!(
                "{{\"manifest\":{},\"records\":[{}]}}\n",
                manifest.to_json(),
                body.join(",")
            );
            write_file(out, &doc)?;
        }
        OutputFormat::Csv => {
            let mut doc = csv_row(&[
                "n".into(),
                "m".into(),
                "delta_re".into(),
                "delta_im".into(),
                "lambda_re".into(),
                "lambda_im".into(),
                "residual".into(),
                "source".into(),
            ]);
            for ev in &records {
                doc.push_str(&csv_row(&[
                    ev.index.n.to_string(),
                    ev.index.m.to_string(),
                    fmt_f64(ev.delta.re),
                    fmt_f64(ev.delta.im),
                    fmt_f64(ev.value.re),
                    fmt_f64(ev.value.im),
                    fmt_f64(ev.residual),
                    ev.source.to_string(),
                ]));
            }
            write_file(out, &doc)?;
            write_sidecar_manifest(out, manifest, None)?;
        }
    }
    println!("wrote {} records to {}", records.len(), out.display());
    Ok(())
}

/// CSV outputs carry their manifest in a sibling `<out>.manifest.json`;
/// mode extras (lambda, normalization) ride along when present.
fn write_sidecar_manifest(
    out: &Path,
    manifest: &RunManifest,
    extra: Option<String>,
) -> Result<(), CliError> {
    let mut path: PathBuf = out.to_path_buf();
    let mut name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".manifest.json");
    path.set_file_name(name);
    let doc = match extra {
        Some(extra) => format!("{{\"manifest\":{},{}}}\n", manifest.to_json(), extra),
        None => format!("{{\"manifest\":{}}}\n", manifest.to_json()),
    };
    write_file(&path, &doc)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_modes(
    n: u32,
    m: i32,
    delta: Complex64,
    grid: usize,
    out: &Path,
    config: &SolverConfig,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    check_delta_flag(delta)?;
    if grid < 2 {
        return Err(CliError::Usage(format!(
            "grid must be at least 2, got {grid}"
        )));
    }
    let index = ModeIndex::new(n, m);
    let solver_err = |e: String| CliError::Solver(format!("solving mode (n={n}, m={m}): {e}"));
    let seed = indefspec_core::spectrum::solve_mode(index, config)
        .map_err(|e| solver_err(e.to_string()))?;
    let ev = if delta == Complex64::new(0.0, 0.0) {
        seed
    } else {
        continue_to_delta(&seed, delta, config.continuation_steps as u32, config)
            .map_err(|e| solver_err(e.to_string()))?
    };
    let spec = ModeSpec::from_eigenvalue(&ev, config).map_err(|e| solver_err(e.to_string()))?;

    // K x K tensor grid over [-1,1] x [0,1], x outer, y inner.
    let mut doc = csv_row(&["x".into(), "y".into(), "re".into(), "im".into()]);
    let steps = (grid - 1) as f64;
    for i in 0..grid {
        let x = -1.0 + 2.0 * i as f64 / steps;
        for j in 0..grid {
            let y = j as f64 / steps;
            let v =
                indefspec_core::modes::f2d(&spec, x, y).map_err(|e| solver_err(e.to_string()))?;
            doc.push_str(&csv_row(&[
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(v.re),
                fmt_f64(v.im),
            ]));
        }
    }
    write_file(out, &doc)?;
    let extra = format!(
        "\"n\":{},\"m\":{},\"grid\":{},\"lambda\":{},\"normalization\":{}",
        n,
        m,
        grid,
        json_complex(spec.lambda()),
        json_complex(spec.normalization()),
    );
    write_sidecar_manifest(out, manifest, Some(extra))?;
    println!(
        "wrote {}x{} samples of mode ({}, {}) to {}",
        grid,
        grid,
        n,
        m,
        out.display()
    );
    Ok(())
}

/// Parses "re,im;re,im;..." into a delta path.
pub fn parse_delta_path(s: &str) -> Result<Vec<Complex64>, CliError> {
    let mut out = Vec::new();
    for tok in s.split(';') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (re, im) = tok
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("delta entry '{tok}': expected re,im")))?;
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid real part '{re}'")))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid imaginary part '{im}'")))?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

fn parse_positive_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let v: f64 = tok
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid {what} entry '{tok}'")))?;
        if v.is_nan() || v <= 0.0 {
            return Err(CliError::Usage(format!(
                "{what} entries must be positive, got {v}"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

/// The real-contrast family: contrast `kappa = 1 + eps`, i.e.
/// `delta = eps` on the real axis.
pub fn epsilon_to_delta(eps: f64) -> Complex64 {
    Complex64::new(eps, 0.0)
}

/// The lossy family with coefficient `-1 + i eta` maps to
/// `delta = i eta / (1 - i eta)` (same eigenvalue problem, exactly).
pub fn eta_to_delta(eta: f64) -> Complex64 {
    let i_eta = Complex64::new(0.0, eta);
    i_eta / (1.0 - i_eta)
}

pub enum TracePath {
    Explicit(String),
    Eta(String),
    Epsilon(String),
}

pub fn cmd_trace(
    n: u32,
    m: i32,
    path: TracePath,
    out: &Path,
    config: &SolverConfig,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    let deltas: Vec<Complex64> = match &path {
        TracePath::Explicit(s) => parse_delta_path(s)?,
        TracePath::Eta(s) => parse_positive_list(s, "eta")?
            .into_iter()
            .map(eta_to_delta)
            .collect(),
        TracePath::Epsilon(s) => parse_positive_list(s, "epsilon")?
            .into_iter()
            .map(epsilon_to_delta)
            .collect(),
    };
    if deltas.is_empty() {
        return Err(CliError::Usage("the delta path is empty".into()));
    }
    for &d in &deltas {
        check_delta_flag(d)?;
    }

    let rows = convergence_study(ModeIndex::new(n, m), &deltas, config)
        .map_err(|e| CliError::Solver(format!("trace failed at (n={n}, m={m}): {e}")))?;
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{{\"delta\":{},\"lambda\":{},\"error\":{}}}",
                json_complex(r.delta),
                json_complex(r.lambda_delta),
                fmt_f64(r.error)
            )
        })
        .collect();
    let doc = format!(
        "{{\"manifest\":{},\"records\":[{}]}}\n",
        manifest.to_json(),
        body.join(",")
    );
    write_file(out, &doc)?;
    println!("wrote {} trace rows to {}", rows.len(), out.display());
    Ok(())
}

pub fn cmd_validate(
    level: Level,
    out: &Path,
    config: &SolverConfig,
    manifest: &RunManifest,
) -> Result<i32, CliError> {
    let checks = run_suite(level, config);
    for check in &checks {
        println!("{}", check.line());
    }
    let all_passed = checks.iter().all(|c| c.passed);
    let body: Vec<String> = checks
        .iter()
        .map(|c| {
            format!(
                "{{\"name\":{},\"passed\":{},\"measured\":{},\"threshold\":{},\"seconds\":{},\"detail\":{}}}",
                json_string(&c.name),
                c.passed,
                fmt_f64(c.measured),
                fmt_f64(c.threshold),
                fmt_f64(c.seconds),
                json_string(&c.detail),
            )
        })
        .collect();
    let doc = format!(
        "{{\"manifest\":{},\"passed\":{},\"checks\":[{}]}}\n",
        manifest.to_json(),
        all_passed,
        body.join(",")
    );
    write_file(out, &doc)?;
    println!(
        "{}: {} of {} checks passed (report: {})",
        if all_passed { "OK" } else { "FAILED" },
        checks.iter().filter(|c| c.passed).count(),
        checks.len(),
        out.display()
    );
    Ok(if all_passed { 0 } else { 1 })
}
