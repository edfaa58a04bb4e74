//! The aggregated validation suite: every invariant the library claims,
//! run as explicit pass/fail checks with measured values.
//!
//! The checks are parameterized so the acceptance tests can pin the
//! exact desk-scale sizes while the CLI offers a quick and a full level.

use crate::fd_oracle;
use crate::modes::{self, KernelModeIndex, ModeSpec};
use crate::numerics::{self, SolverConfig};
use crate::secular::{self, TransverseIndex};
use crate::spectrum::{self, ModeIndex};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// The worst measured quantity the check compared.
    pub measured: f64,
    /// The limit it was compared against.
    pub threshold: f64,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    fn finish(
        name: &str,
        passed: bool,
        measured: f64,
        threshold: f64,
        detail: String,
        t0: Instant,
    ) -> Self {
        Self {
            name: name.to_string(),
            passed,
            measured,
            threshold,
            detail,
            seconds: t0.elapsed().as_secs_f64(),
        }
    }

    /// One-line report form, stable enough to grep.
    pub fn line(&self) -> String {
        format!(
            "{} {} [measured {:.3e}, threshold {:.3e}, {:.2}s] {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold,
            self.seconds,
            self.detail
        )
    }
}

/// Validation depth for the CLI `validate` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// `n <= 2`, grids up to 800.
    Quick,
    /// `n <= 5`, grids up to 1600: the acceptance-criteria sizes.
    Full,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `|F(0)| < 1e-13` for `n = 1..=n_max`.
pub fn check_zero_root(n_max: u32) -> CheckResult {
    let t0 = Instant::now();
    let threshold = 1e-13;
    let mut worst = 0.0_f64;
    for nn in 1..=n_max {
        match secular::eval_f_real(0.0, TransverseIndex::new(nn)) {
            Ok(v) => worst = worst.max(v.abs()),
            Err(e) => {
                return CheckResult::finish(
                    "zero root",
                    false,
                    f64::NAN,
                    threshold,
                    format!("evaluation failed: {e}"),
                    t0,
                )
            }
        }
    }
    CheckResult::finish(
        "zero root",
        worst < threshold,
        worst,
        threshold,
        format!("max |F(0)| over n <= {n_max}"),
        t0,
    )
}

/// `F'(0)` matches `(2 n pi - sinh(2 n pi)) / (2 (n pi)^3 cosh^2(n pi))`
/// to relative 1e-10 and is negative, for `n = 1..=n_max`.
pub fn check_derivative_closed_form(n_max: u32) -> CheckResult {
    let t0 = Instant::now();
    let threshold = 1e-10;
    let mut worst = 0.0_f64;
    let mut all_negative = true;
    for nn in 1..=n_max {
        let v = secular::eval_f_prime_real(0.0, TransverseIndex::new(nn)).unwrap();
        let npi = nn as f64 * PI;
        let closed = (2.0 * npi - (2.0 * npi).sinh()) / (2.0 * npi.powi(3) * npi.cosh().powi(2));
        worst = worst.max((v - closed).abs() / closed.abs());
        all_negative &= v < 0.0;
    }
    CheckResult::finish(
        "derivative closed form",
        worst < threshold && all_negative,
        worst,
        threshold,
        format!("max rel. deviation of F'(0) over n <= {n_max}; negativity {all_negative}"),
        t0,
    )
}

/// Sign scan of `F` over `[-(n pi)^2 + 1e-6, -1e-6] u [1e-6, (n pi)^2 - 1e-6]`
/// finds no sign change for `n = 1..=n_max`.
pub fn check_spectral_gap(n_max: u32, points: usize) -> CheckResult {
    let t0 = Instant::now();
    let mut changes = 0usize;
    for nn in 1..=n_max {
        let n = TransverseIndex::new(nn);
        let w = n.threshold();
        for side in [1.0, -1.0] {
            let a = 1e-6;
            let b = w - 1e-6;
            let mut prev = secular::eval_f_real(side * a, n).unwrap();
            for i in 1..points {
                let lam = side * (a + (b - a) * i as f64 / (points - 1) as f64);
                let cur = secular::eval_f_real(lam, n).unwrap();
                if prev * cur < 0.0 {
                    changes += 1;
                }
                prev = cur;
            }
        }
    }
    CheckResult::finish(
        "spectral gap",
        changes == 0,
        changes as f64,
        0.5,
        format!("sign changes inside (0, (n pi)^2) and its mirror, n <= {n_max}, {points} points per side"),
        t0,
    )
}

/// Solves the negative-side roots directly (no reflection) and compares
/// with `-lambda_{n,m}`; also gathers root simplicity data. Returns the
/// symmetry check and the simplicity check, in that order.
pub fn check_symmetry_and_simplicity(
    n_max: u32,
    m_max: u32,
    config: &SolverConfig,
) -> [CheckResult; 2] {
    let t0 = Instant::now();
    let threshold = 1e-10;
    let mut worst_gap = 0.0_f64;
    let mut min_abs_deriv = f64::INFINITY;
    let mut deriv_sign_ok = true;
    let shrink = 2.0 * config.pole_exclusion.max(secular::DEFAULT_POLE_EXCLUSION);
    let mut failure: Option<String> = None;

    'outer: for nn in 1..=n_max {
        let n = TransverseIndex::new(nn);
        let w = n.threshold();
        let positives = match spectrum::solve_unperturbed(n, m_max, config) {
            Ok(evs) => evs,
            Err(e) => {
                failure = Some(format!("positive solve failed: {e}"));
                break 'outer;
            }
        };
        for ev in positives.iter().filter(|e| e.index.m != 0) {
            min_abs_deriv = min_abs_deriv.min(ev.derivative.norm());
            deriv_sign_ok &= ev.derivative.re < 0.0;
        }
        for m in 1..=m_max {
            // Negative-side bracket, mirror of the positive template.
            let lo = -(w + ((m as f64 + 0.5) * PI).powi(2)) + shrink;
            let hi = -(w + (m as f64 * PI).powi(2));
            let root = match spectrum::refine_root(lo, hi, m, n, config) {
                Ok((x, _, _)) => x,
                Err(e) => {
                    failure = Some(format!(
                        "negative-side solve failed at (n={nn}, m={m}): {e}"
                    ));
                    break 'outer;
                }
            };
            let positive = positives
                .iter()
                .find(|e| e.index.m == m as i32)
                .expect("m in range")
                .value
                .re;
            worst_gap = worst_gap.max((root + positive).abs());
        }
    }

    let symmetry = match &failure {
        None => CheckResult::finish(
            "symmetry",
            worst_gap < threshold,
            worst_gap,
            threshold,
            format!("max |lambda(-) + lambda(+)| over n <= {n_max}, m <= {m_max}, negative side solved independently"),
            t0,
        ),
        Some(msg) => CheckResult::finish("symmetry", false, f64::NAN, threshold, msg.clone(), t0),
    };
    let simplicity = CheckResult::finish(
        "root simplicity",
        failure.is_none() && min_abs_deriv > 1e-8 && deriv_sign_ok,
        min_abs_deriv,
        1e-8,
        format!("min |F'| at roots (must exceed threshold), F' < 0 everywhere: {deriv_sign_ok}"),
        t0,
    );
    [symmetry, simplicity]
}

/// Finite-difference oracle agrees with the secular roots: Richardson
/// order in `[1.7, 2.3]` per mode and final-grid agreement within
/// `max(1e-3, 1e-4 |lambda|)`.
pub fn check_oracle_equivalence(
    n_list: &[u32],
    m_span: u32,
    grids: &[usize],
    config: &SolverConfig,
) -> CheckResult {
    let t0 = Instant::now();
    let mut worst_order_dev = 0.0_f64;
    let mut worst_agreement = 0.0_f64;
    let mut detail = String::new();
    let last_grid = *grids.last().expect("at least one grid");
    for &nn in n_list {
        let n = TransverseIndex::new(nn);
        let span = m_span as i32;
        let rows = match fd_oracle::oracle_compare(n, -span..=span, grids, config) {
            Ok(rows) => rows,
            Err(e) => {
                return CheckResult::finish(
                    "oracle equivalence",
                    false,
                    f64::NAN,
                    0.3,
                    format!("comparison failed for n = {nn}: {e}"),
                    t0,
                )
            }
        };
        for row in rows {
            // An infinite order marks agreement at the solver resolution
            // floor (the zero mode is exact at the discrete level).
            if row.order.is_finite() {
                worst_order_dev = worst_order_dev.max((row.order - 2.0).abs());
            }
            let final_err = row
                .errors
                .iter()
                .find(|(g, _)| *g == last_grid)
                .map(|(_, e)| *e)
                .unwrap_or(f64::NAN);
            let allowed = (1e-3_f64).max(1e-4 * row.lambda_secular.abs());
            worst_agreement = worst_agreement.max(final_err / allowed);
            if detail.len() < 400 {
                detail.push_str(&format!("({nn},{}) p={:.2}; ", row.m, row.order));
            }
        }
    }
    CheckResult::finish(
        "oracle equivalence",
        worst_order_dev <= 0.3 && worst_agreement <= 1.0,
        worst_order_dev,
        0.3,
        format!(
            "max |order - 2| (shown) and max final-grid error ratio {:.3}; {}",
            worst_agreement, detail
        ),
        t0,
    )
}

/// Closed-form normalization against quadrature (`delta = 0`, `0.1`,
/// `0.05i`) and 2D orthonormality of the `delta = 0` family.
pub fn check_normalization_orthonormality(
    n_max: u32,
    m_span: u32,
    config: &SolverConfig,
) -> CheckResult {
    let t0 = Instant::now();
    let mut worst_norm = 0.0_f64;
    let mut worst_orth = 0.0_f64;

    // Unit norms, delta = 0.
    let mut specs: Vec<ModeSpec> = Vec::new();
    for nn in 1..=n_max {
        let evs = spectrum::solve_unperturbed(TransverseIndex::new(nn), m_span, config).unwrap();
        for ev in &evs {
            specs.push(ModeSpec::from_eigenvalue(ev, config).unwrap());
        }
    }
    for spec in &specs {
        let norm = numerics::integrate(
            |x| Complex64::new(modes::psi(spec, x).unwrap().norm_sqr(), 0.0),
            -1.0,
            1.0,
            config.quad_rel_tol,
        )
        .unwrap()
        .re;
        worst_norm = worst_norm.max((norm - 1.0).abs());
    }

    // Perturbed modes: closed-form normalization against quadrature.
    let seed = spectrum::solve_mode(ModeIndex::new(1, 1), config).unwrap();
    for delta in [Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.05)] {
        let ev =
            spectrum::continue_to_delta(&seed, delta, config.continuation_steps as u32, config)
                .unwrap();
        let spec = ModeSpec::from_eigenvalue(&ev, config).unwrap();
        let norm = numerics::integrate(
            |x| Complex64::new(modes::psi(&spec, x).unwrap().norm_sqr(), 0.0),
            -1.0,
            1.0,
            config.quad_rel_tol,
        )
        .unwrap()
        .re;
        worst_norm = worst_norm.max((norm - 1.0).abs());
    }

    // 2D orthonormality by tensor quadrature.
    for (i, a) in specs.iter().enumerate() {
        for b in &specs[i..] {
            let axial = numerics::integrate(
                |x| modes::psi(a, x).unwrap() * modes::psi(b, x).unwrap().conj(),
                -1.0,
                1.0,
                config.quad_rel_tol,
            )
            .unwrap();
            let transverse = numerics::integrate_real(
                |y| {
                    modes::chi(a.index().transverse(), y).unwrap()
                        * modes::chi(b.index().transverse(), y).unwrap()
                },
                0.0,
                1.0,
                config.quad_rel_tol,
            )
            .unwrap();
            let inner = axial * transverse;
            let expected = if a.index() == b.index() { 1.0 } else { 0.0 };
            worst_orth = worst_orth.max((inner - expected).norm());
        }
    }

    let passed = worst_norm < 1e-8 && worst_orth < 1e-7;
    CheckResult::finish(
        "normalization and orthonormality",
        passed,
        worst_norm.max(worst_orth),
        1e-7,
        format!(
            "worst |norm - 1| = {worst_norm:.3e} (limit 1e-8), worst 2D inner-product deviation = {worst_orth:.3e} (limit 1e-7), n <= {n_max}, |m| <= {m_span}"
        ),
        t0,
    )
}

/// Interface conditions: `psi'(0+) + psi'(0-) = 0` at `delta = 0` and
/// `(1+delta) psi'(0+) + psi'(0-) = 0` for perturbed modes, both
/// relative to the derivative scale.
pub fn check_interface_conditions(config: &SolverConfig) -> CheckResult {
    let t0 = Instant::now();
    let threshold = 1e-8;
    let mut worst = 0.0_f64;
    let fd_step = 1e-4;

    let mut cases: Vec<(ModeSpec, Complex64)> = Vec::new();
    for (nn, m) in [(1, 1), (1, 0), (2, 1), (3, 2)] {
        let ev = spectrum::solve_mode(ModeIndex::new(nn, m), config).unwrap();
        cases.push((ModeSpec::from_eigenvalue(&ev, config).unwrap(), zero()));
    }
    let seed = spectrum::solve_mode(ModeIndex::new(1, 1), config).unwrap();
    for delta in [
        Complex64::new(0.1, 0.0),
        Complex64::new(0.0, 0.05),
        Complex64::new(0.02, 0.03),
    ] {
        let ev =
            spectrum::continue_to_delta(&seed, delta, config.continuation_steps as u32, config)
                .unwrap();
        cases.push((ModeSpec::from_eigenvalue(&ev, config).unwrap(), delta));
    }

    for (spec, delta) in &cases {
        let f = |x: f64| modes::psi(spec, x).unwrap();
        let right = numerics::one_sided_diff4(f, 0.0, fd_step, 1.0);
        let left = numerics::one_sided_diff4(f, 0.0, fd_step, -1.0);
        let scale = right.norm().max(left.norm());
        let resid = ((1.0 + delta) * right + left).norm() / scale;
        worst = worst.max(resid);
    }
    CheckResult::finish(
        "interface conditions",
        worst < threshold,
        worst,
        threshold,
        format!(
            "max |(1+delta) psi'(0+) + psi'(0-)| / ||psi'|| over {} modes",
            cases.len()
        ),
        t0,
    )
}

/// Kernel functions `f_{0,k}`, `k = 1..=k_max`: harmonic on each half
/// to the stencil's O(h^2), vanish on the outer boundary, match
/// Dirichlet and Neumann data across the interface.
pub fn check_kernel_functions(k_max: u32) -> CheckResult {
    let t0 = Instant::now();
    let h = 1e-3;
    let mut worst_harmonic = 0.0_f64; // relative to the stencil bound
    let mut worst_boundary = 0.0_f64;
    let mut worst_match = 0.0_f64;

    for kk in 1..=k_max {
        let k = KernelModeIndex::new(kk);
        let kpi = kk as f64 * PI;
        let f = |x: f64, y: f64| modes::kernel_function(k, x, y).unwrap();

        // 5-point Laplacian at interior samples of both halves.
        for &x in &[-0.8, -0.45, -0.1, 0.1, 0.45, 0.8] {
            for &y in &[0.25, 0.5, 0.75] {
                let lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y))
                    / (h * h);
                let local = f(x, y).abs().max(1.0);
                // Truncation constant is (f_xxxx + f_yyyy) h^2 / 12 = (k pi)^4 f h^2 / 6.
                let bound = h * h * kpi.powi(4) * local;
                worst_harmonic = worst_harmonic.max(lap.abs() / bound);
            }
        }

        // Outer boundary: 64 samples around the rectangle.
        let scale = kpi.sinh().max(1.0);
        for i in 0..=15 {
            let t = i as f64 / 15.0;
            worst_boundary = worst_boundary.max(f(1.0, t).abs() / scale);
            worst_boundary = worst_boundary.max(f(-1.0, t).abs() / scale);
            worst_boundary = worst_boundary.max(f(-1.0 + 2.0 * t, 0.0).abs() / scale);
            worst_boundary = worst_boundary.max(f(-1.0 + 2.0 * t, 1.0).abs() / scale);
        }

        // Interface traces: Dirichlet values meet, Neumann data match
        // (the outward normals point oppositely, so the plain x-derivatives
        // sum to zero).
        for &y in &[0.2, 0.5, 0.9] {
            let dirichlet = (f(1e-9, y) - f(-1e-9, y)).abs() / scale;
            worst_match = worst_match.max(dirichlet);
            let fc = |x: f64| Complex64::new(f(x, y), 0.0);
            let right = numerics::one_sided_diff4(fc, 0.0, 1e-4, 1.0);
            let left = numerics::one_sided_diff4(fc, 0.0, 1e-4, -1.0);
            let neumann = (right + left).norm() / right.norm().max(left.norm());
            worst_match = worst_match.max(neumann);
        }
    }

    let passed = worst_harmonic < 1.0 && worst_boundary < 1e-10 && worst_match < 1e-8;
    CheckResult::finish(
        "kernel functions",
        passed,
        worst_harmonic,
        1.0,
        format!(
            "FD-Laplacian residual / O(h^2) bound (shown); boundary sup {worst_boundary:.3e} (limit 1e-10); interface trace mismatch {worst_match:.3e} (limit 1e-8); k <= {k_max}"
        ),
        t0,
    )
}

/// Eigenvalue and eigenfunction convergence as `delta -> 0` along the
/// real-contrast and lossy families, with the empirical order in
/// `|delta|` close to 1.
pub fn check_convergence_families(config: &SolverConfig) -> CheckResult {
    let t0 = Instant::now();
    let mut all_monotone = true;
    let mut worst_order_dev = 0.0_f64;
    let mut detail = String::new();
    let grid: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 / 100.0).collect();

    for (nn, m) in [(1, 1), (1, 0)] {
        let seed = spectrum::solve_mode(ModeIndex::new(nn, m), config).unwrap();
        let seed_spec = ModeSpec::from_eigenvalue(&seed, config).unwrap();
        let seed_profile: Vec<Complex64> = grid
            .iter()
            .map(|&x| modes::psi(&seed_spec, x).unwrap())
            .collect();
        for family in ["real", "imag"] {
            let deltas: Vec<Complex64> = [1e-1, 1e-2, 1e-3]
                .iter()
                .map(|&d| match family {
                    "real" => Complex64::new(d, 0.0),
                    _ => Complex64::new(0.0, d),
                })
                .collect();
            let rows = spectrum::convergence_study(ModeIndex::new(nn, m), &deltas, config).unwrap();
            let monotone = rows.windows(2).all(|w| w[1].error < w[0].error);
            all_monotone &= monotone;
            let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta.norm(), r.error)).collect();
            let order = numerics::richardson_order(&samples).unwrap_or(f64::NAN);
            worst_order_dev = worst_order_dev.max((order - 1.0).abs());

            // Eigenfunction sup-distance on the 201-point grid.
            let mut sup_prev = f64::INFINITY;
            for row in &rows {
                let ev = spectrum::continue_to_delta(
                    &seed,
                    row.delta,
                    config.continuation_steps as u32,
                    config,
                )
                .unwrap();
                let spec = ModeSpec::from_eigenvalue(&ev, config).unwrap();
                let sup = grid
                    .iter()
                    .zip(&seed_profile)
                    .map(|(&x, &p0)| (modes::psi(&spec, x).unwrap() - p0).norm())
                    .fold(0.0_f64, f64::max);
                all_monotone &= sup < sup_prev;
                sup_prev = sup;
            }
            detail.push_str(&format!("({nn},{m},{family}) p={order:.2}; "));
        }
    }
    CheckResult::finish(
        "delta convergence families",
        all_monotone && worst_order_dev <= 0.2,
        worst_order_dev,
        0.2,
        format!(
            "max |order - 1| (shown); errors and sup-distances monotone: {all_monotone}; {detail}"
        ),
        t0,
    )
}

/// Compatibility residuals stay away from zero on the validated circle
/// `|delta| = 0.38`, ruling out the exceptional roots.
pub fn check_compatibility_bound(samples: usize, n_max: u32) -> CheckResult {
    let t0 = Instant::now();
    let threshold = 1e-2;
    let mut min_resid = f64::INFINITY;
    for i in 0..samples {
        let phi = 2.0 * PI * i as f64 / samples as f64;
        let delta = Complex64::new(0.38 * phi.cos(), 0.38 * phi.sin());
        for nn in 1..=n_max {
            let (r1, r2) =
                secular::compatibility_residuals(delta, TransverseIndex::new(nn)).unwrap();
            min_resid = min_resid.min(r1.norm()).min(r2.norm());
        }
    }
    CheckResult::finish(
        "compatibility bound",
        min_resid > threshold,
        min_resid,
        threshold,
        format!("min residual over {samples} samples of |delta| = 0.38, n <= {n_max} (must exceed threshold)"),
        t0,
    )
}

/// The spectrum keeps accumulating: eigenvalue counts in `[-cap, cap]`
/// strictly increase across the caps.
pub fn check_accumulation(caps: &[f64], n_max: u32, config: &SolverConfig) -> CheckResult {
    let t0 = Instant::now();
    let mut counts = Vec::with_capacity(caps.len());
    for &cap in caps {
        let mut count = 0usize;
        for nn in 1..=n_max {
            let n = TransverseIndex::new(nn);
            let m_max = ((cap - n.threshold()).max(0.0).sqrt() / PI).ceil() as u32 + 1;
            let evs = spectrum::solve_unperturbed(n, m_max, config).unwrap();
            count += evs.iter().filter(|e| e.value.re.abs() <= cap).count();
        }
        counts.push(count);
    }
    let increasing = counts.windows(2).all(|w| w[0] < w[1]);
    CheckResult::finish(
        "accumulation",
        increasing,
        *counts.last().unwrap() as f64,
        counts[0] as f64,
        format!("counts {counts:?} over caps {caps:?} (strictly increasing)"),
        t0,
    )
}

/// Gap function positivity on a fine grid (module invariant).
pub fn check_gap_positivity(n_max: u32) -> CheckResult {
    let t0 = Instant::now();
    let mut min_val = f64::INFINITY;
    for nn in 1..=n_max {
        let n = TransverseIndex::new(nn);
        let w = n.threshold();
        for i in 0..1000 {
            let lam = 1e-6 + (w - 2e-6) * i as f64 / 999.0;
            min_val = min_val.min(secular::eval_gap(lam, n).unwrap());
        }
    }
    CheckResult::finish(
        "gap function positivity",
        min_val > 0.0,
        min_val,
        0.0,
        format!(
            "min G on 1000-point grids inside (0, (n pi)^2), n <= {n_max} (must exceed threshold)"
        ),
        t0,
    )
}

/// No discrete eigenvalue inside the spectral gap `(0.5, pi^2 - 0.5)`.
pub fn check_oracle_gap(cells: usize) -> CheckResult {
    let t0 = Instant::now();
    let found = fd_oracle::spectrum_in_window(TransverseIndex::new(1), cells, 0.5, PI * PI - 0.5)
        .map(|s| s.eigenvalues.len())
        .unwrap_or(usize::MAX);
    CheckResult::finish(
        "oracle spectral gap",
        found == 0,
        found as f64,
        0.5,
        format!("discrete eigenvalues in (0.5, pi^2 - 0.5) at N = {cells}"),
        t0,
    )
}

/// The 0.32 reference constant of the exceptional-solution bound.
pub fn check_reference_constant() -> CheckResult {
    let t0 = Instant::now();
    let v = secular::compatibility_reference_constant();
    let dev = (v - 0.32).abs();
    CheckResult::finish(
        "0.32 reference constant",
        dev < 0.001,
        v,
        0.321,
        "(1/pi)(sinh(2 pi) + 1)/(cosh(2 pi) - 1), reported value vs 0.32".into(),
        t0,
    )
}

/// Residual invariant: re-evaluates `|H|` at every record returned by a
/// spectrum solve (including a continuation batch).
pub fn check_residual_invariant(n_max: u32, m_max: u32, config: &SolverConfig) -> CheckResult {
    let t0 = Instant::now();
    let threshold = 1e-12;
    let mut worst = 0.0_f64;
    let evs = spectrum::solve_spectrum(n_max, m_max, zero(), config).unwrap();
    for ev in &evs {
        let n = ev.index.transverse();
        worst = worst.max(secular::eval_h(ev.value, ev.delta, n).unwrap().norm());
    }
    let delta = Complex64::new(0.05, 0.02);
    let evs = spectrum::solve_spectrum(n_max.min(2), m_max.min(3), delta, config).unwrap();
    for ev in &evs {
        let n = ev.index.transverse();
        worst = worst.max(secular::eval_h(ev.value, ev.delta, n).unwrap().norm());
    }
    CheckResult::finish(
        "residual invariant",
        worst < threshold,
        worst,
        threshold,
        format!("max re-evaluated |H| over solved records, n <= {n_max}, |m| <= {m_max}"),
        t0,
    )
}

/// Runs the whole suite at the requested level. Oracle grids come from
/// `config.fd_grid_sizes`, capped at 800 for the quick level.
pub fn run_suite(level: Level, config: &SolverConfig) -> Vec<CheckResult> {
    let mut oracle_grids: Vec<usize> = match level {
        Level::Quick => config
            .fd_grid_sizes
            .iter()
            .copied()
            .filter(|&g| g <= 800)
            .collect(),
        Level::Full => config.fd_grid_sizes.clone(),
    };
    if oracle_grids.len() < 2 {
        oracle_grids = match level {
            Level::Quick => vec![400, 800],
            Level::Full => vec![400, 800, 1600],
        };
    }
    let (gap_n, sym_n, sym_m, oracle_n, orth_n, accum_n): (u32, u32, u32, Vec<u32>, u32, u32) =
        match level {
            Level::Quick => (2, 2, 5, vec![1, 2], 2, 2),
            Level::Full => (5, 5, 10, vec![1, 2], 3, 5),
        };
    let mut out = Vec::new();
    out.push(check_zero_root(10));
    out.push(check_derivative_closed_form(10));
    out.push(check_spectral_gap(gap_n, 10_000));
    let [symmetry, simplicity] = check_symmetry_and_simplicity(sym_n, sym_m, config);
    out.push(symmetry);
    out.push(simplicity);
    out.push(check_oracle_equivalence(
        &oracle_n,
        3,
        &oracle_grids,
        config,
    ));
    out.push(check_normalization_orthonormality(orth_n, 2, config));
    out.push(check_interface_conditions(config));
    out.push(check_kernel_functions(3));
    out.push(check_convergence_families(config));
    out.push(check_compatibility_bound(64, 20));
    out.push(check_accumulation(&[1e2, 1e3, 1e4], accum_n, config));
    out.push(check_gap_positivity(gap_n));
    out.push(check_oracle_gap(*oracle_grids.last().unwrap()));
    out.push(check_reference_constant());
    out.push(check_residual_invariant(2, 3, config));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_constant_check_passes() {
        let r = check_reference_constant();
        assert!(r.passed, "{}", r.line());
        assert!((r.measured - 0.3207).abs() < 1e-3);
    }

    #[test]
    fn zero_root_check_passes() {
        let r = check_zero_root(10);
        assert!(r.passed, "{}", r.line());
    }

    #[test]
    fn line_format_is_stable() {
        let r = check_zero_root(2);
        let line = r.line();
        assert!(line.starts_with("PASS zero root"));
        assert!(line.contains("threshold"));
    }
}
