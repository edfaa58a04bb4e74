//! Command-line front end for the indefinite-Laplacian spectral solver.
//!
//! Subcommands: `spectrum`, `modes`, `trace`, `validate`. Exit codes:
//! 0 success, 1 validation failure, 2 usage error, 3 solver/I-O error.
//! `INDEFSPEC_THREADS` caps worker threads (0 or unset: automatic);
//! `SOURCE_DATE_EPOCH` pins the manifest timestamp for byte-identical
//! reruns.

mod commands;
mod config;
mod manifest;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{CliError, OutputFormat, TracePath};
use indefspec_core::validate::Level;
use indefspec_core::Complex64;
use manifest::RunManifest;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "indefspec",
    version,
    about = "Spectrum and eigenfunctions of the indefinite Laplacian -div(sgn grad) on a rectangle"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct CommonOpts {
    /// Optional key=value config file; flags below override its entries
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Accepted secular residual |H| at a root
    #[arg(long, global = true, value_name = "TOL")]
    residual_tol: Option<f64>,
    /// Bisection bracket width target
    #[arg(long, global = true, value_name = "TOL")]
    bracket_width_tol: Option<f64>,
    /// Relative tolerance for adaptive quadrature
    #[arg(long, global = true, value_name = "TOL")]
    quad_rel_tol: Option<f64>,
    /// Exclusion radius around the secular poles
    #[arg(long, global = true, value_name = "R")]
    pole_exclusion: Option<f64>,
    /// Increments for the straight-segment delta continuation
    #[arg(long, global = true, value_name = "K")]
    continuation_steps: Option<usize>,
    /// Comma-separated even grid sizes for the FD oracle
    #[arg(long, global = true, value_name = "N,N,...")]
    fd_grid_sizes: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute eigenvalue records, sorted by (n, m)
    Spectrum {
        /// Largest transverse index n
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        /// Largest longitudinal index m (0 keeps only the zero modes)
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        /// Real part of the contrast perturbation delta
        #[arg(long, default_value_t = 0.0)]
        delta_re: f64,
        /// Imaginary part of delta
        #[arg(long, default_value_t = 0.0)]
        delta_im: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Output path (default spectrum.json / spectrum.csv)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sample one eigenfunction on a grid over the rectangle
    Modes {
        /// Transverse index n >= 1
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Longitudinal index m (0 is the zero mode)
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        #[arg(long, default_value_t = 0.0)]
        delta_re: f64,
        #[arg(long, default_value_t = 0.0)]
        delta_im: f64,
        /// Samples per axis
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Output path (default modes.csv; manifest sidecar alongside)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Track one eigenvalue along a delta path and report convergence
    Trace {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        /// Explicit path "re,im;re,im;..."
        #[arg(long, value_name = "PATH", conflicts_with_all = ["eta_sequence", "epsilon_sequence"])]
        delta_path: Option<String>,
        /// Lossy-family shorthand: eta values, delta = i eta/(1 - i eta)
        #[arg(long, value_name = "E,E,...", conflicts_with = "epsilon_sequence")]
        eta_sequence: Option<String>,
        /// Real-contrast shorthand: epsilon values, delta = epsilon
        #[arg(long, value_name = "E,E,...")]
        epsilon_sequence: Option<String>,
        /// Output path (default trace.json)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the invariant/oracle suite and write a pass/fail report
    Validate {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Report path
        #[arg(long, default_value = "validate-report.json")]
        out: PathBuf,
    },
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("INDEFSPEC_THREADS") {
        match raw.parse::<usize>() {
            Ok(0) => {}
            Ok(k) => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
            Err(_) => eprintln!("warning: ignoring non-numeric INDEFSPEC_THREADS='{raw}'"),
        }
    }
}

fn main() {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let overrides = config::ConfigOverrides {
        residual_tol: cli.common.residual_tol,
        bracket_width_tol: cli.common.bracket_width_tol,
        quad_rel_tol: cli.common.quad_rel_tol,
        pole_exclusion: cli.common.pole_exclusion,
        continuation_steps: cli.common.continuation_steps,
        fd_grid_sizes: cli
            .common
            .fd_grid_sizes
            .as_deref()
            .map(config::parse_grid_list)
            .transpose()
            .map_err(CliError::Usage)?,
    };
    let solver_config =
        config::resolve(cli.common.config.as_deref(), &overrides).map_err(CliError::Usage)?;
    let command_line: Vec<String> = std::env::args().skip(1).collect();
    let manifest = RunManifest::capture(command_line.join(" "), &solver_config);

    match cli.command {
        Cmd::Spectrum {
            n_max,
            m_max,
            delta_re,
            delta_im,
            format,
            out,
        } => {
            let (format, default_name) = match format {
                FormatArg::Json => (OutputFormat::Json, "spectrum.json"),
                FormatArg::Csv => (OutputFormat::Csv, "spectrum.csv"),
            };
            let out = out.unwrap_or_else(|| PathBuf::from(default_name));
            commands::cmd_spectrum(
                n_max,
                m_max,
                Complex64::new(delta_re, delta_im),
                format,
                &out,
                &solver_config,
                &manifest,
            )?;
            Ok(0)
        }
        Cmd::Modes {
            n,
            m,
            delta_re,
            delta_im,
            grid,
            out,
        } => {
            let out = out.unwrap_or_else(|| PathBuf::from("modes.csv"));
            commands::cmd_modes(
                n,
                m,
                Complex64::new(delta_re, delta_im),
                grid,
                &out,
                &solver_config,
                &manifest,
            )?;
            Ok(0)
        }
        Cmd::Trace {
            n,
            m,
            delta_path,
            eta_sequence,
            epsilon_sequence,
            out,
        } => {
            let path = match (delta_path, eta_sequence, epsilon_sequence) {
                (Some(p), None, None) => TracePath::Explicit(p),
                (None, Some(p), None) => TracePath::Eta(p),
                (None, None, Some(p)) => TracePath::Epsilon(p),
                (None, None, None) => {
                    return Err(CliError::Usage(
                        "one of --delta-path, --eta-sequence, --epsilon-sequence is required"
                            .into(),
                    ))
                }
                _ => unreachable!("clap conflicts keep these exclusive"),
            };
            let out = out.unwrap_or_else(|| PathBuf::from("trace.json"));
            commands::cmd_trace(n, m, path, &out, &solver_config, &manifest)?;
            Ok(0)
        }
        Cmd::Validate { level, out } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            commands::cmd_validate(level, &out, &solver_config, &manifest)
        }
    }
}
