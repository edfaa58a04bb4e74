//! Eigenvalue location: pole-aware bracketing plus Newton polish for the
//! unperturbed problem, complex Newton continuation in `delta`, and
//! convergence studies as `delta -> 0`.
//!
//! For fixed `n` the positive roots interlace the poles of the tangent
//! side: the m-th root lies in
//! `((n pi)^2 + (m pi)^2, (n pi)^2 + ((m + 1/2) pi)^2)`, where `F` runs
//! from a positive value down to `-inf`. That localization is never
//! trusted blindly: every candidate bracket is verified by a sign check
//! with a subdivision fallback. Negative roots come from the exact
//! oddness of `F`; the sign-scan invariants re-verify that independently.

use crate::numerics::SolverConfig;
use crate::secular::{self, SecularError, TransverseIndex, DELTA_VALIDATED_RADIUS};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    /// No sign change found even after subdivision; the localization
    /// argument guarantees one, so this indicates a bug, not bad data.
    #[error("no sign change found for root (n = {n}, m = {m}) after subdivision")]
    BracketNotFound { n: u32, m: u32 },
    /// Newton left the bracket and bisection could not reach the
    /// residual target either.
    #[error("root polish stalled for (n = {n}, m = {m}): residual {residual:.3e}")]
    NewtonDivergence { n: u32, m: u32, residual: f64 },
    /// Continuation kept halving the delta step without recovering.
    #[error("continuation stalled at delta = {delta} after {halvings} halvings")]
    ContinuationStall { delta: Complex64, halvings: u32 },
    /// Target outside the validated disk `|delta| <= 0.38`.
    #[error("|delta| = {norm:.4} exceeds the validated radius 0.38")]
    DeltaOutOfRange { delta: Complex64, norm: f64 },
    /// Seed eigenvalue does not satisfy the continuation preconditions.
    #[error("continuation seed rejected: {0}")]
    BadSeed(&'static str),
    #[error(transparent)]
    Secular(#[from] SecularError),
}

/// Identifies one eigenvalue branch: transverse number `n >= 1` and
/// longitudinal root index `m` (`m = 0` is the zero eigenvalue, negative
/// `m` the reflected branch).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub n: u32,
    pub m: i32,
}

impl ModeIndex {
    pub fn new(n: u32, m: i32) -> Self {
        assert!(n >= 1, "transverse index must satisfy n >= 1");
        Self { n, m }
    }

    pub fn transverse(&self) -> TransverseIndex {
        TransverseIndex::new(self.n)
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

/// How an eigenvalue record was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Located by sign-change bracketing and polish at `delta = 0`.
    Bracketed,
    /// Reflected from the positive branch through the oddness of `F`.
    Symmetry,
    /// Tracked from a `delta = 0` seed by Newton continuation.
    Continuation,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Bracketed => write!(f, "bracketed"),
            Source::Symmetry => write!(f, "symmetry"),
            Source::Continuation => write!(f, "continuation"),
        }
    }
}

/// A computed root of the secular equation, with its residual and the
/// derivative of the secular function there.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub index: ModeIndex,
    pub delta: Complex64,
    pub value: Complex64,
    /// `|H(value, delta, n)|`, re-evaluated after the solve.
    pub residual: f64,
    /// `dH/dlambda` at the root; nonzero at simple roots.
    pub derivative: Complex64,
    pub source: Source,
}

/// A sign-change interval for one positive root at `delta = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub n: u32,
    pub m: u32,
    pub lo: f64,
    pub hi: f64,
}

/// Candidate interval for the m-th positive root before verification.
fn candidate_interval(n: TransverseIndex, m: u32, shrink: f64) -> (f64, f64) {
    let w = n.threshold();
    let lo = w + (m as f64 * PI).powi(2);
    let hi = w + ((m as f64 + 0.5) * PI).powi(2) - shrink;
    (lo, hi)
}

const SUBDIVISION_PANELS: usize = 1 << 10;

/// Brackets the first `m_max` positive roots for transverse index `n`.
///
/// Each candidate interval is verified by a sign check of `F`; on
/// failure a 2^10-panel scan of the enclosing inter-pole interval is
/// attempted before giving up.
pub fn bracket_positive_roots(
    n: TransverseIndex,
    m_max: u32,
    config: &SolverConfig,
) -> Result<Vec<Bracket>, SpectrumError> {
    assert!(m_max >= 1, "m_max must be at least 1");
    // Twice the evaluation guard, so the shrunk endpoint is accepted.
    let shrink = 2.0 * config.pole_exclusion.max(secular::DEFAULT_POLE_EXCLUSION);
    let mut out = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let (lo, hi) = candidate_interval(n, m, shrink);
        let f_lo = secular::eval_f_real(lo, n)?;
        let f_hi = secular::eval_f_real(hi, n)?;
        if f_lo * f_hi < 0.0 {
            out.push(Bracket {
                n: n.get(),
                m,
                lo,
                hi,
            });
            continue;
        }
        // Fallback: scan the full inter-pole interval in 2^10 panels.
        let w = n.threshold();
        let scan_lo = w + ((m as f64 - 0.5) * PI).powi(2) + shrink;
        let scan_hi = w + ((m as f64 + 0.5) * PI).powi(2) - shrink;
        let mut found = None;
        let mut a = scan_lo;
        let mut f_a = secular::eval_f_real(a, n)?;
        for i in 1..=SUBDIVISION_PANELS {
            let b = scan_lo + (scan_hi - scan_lo) * i as f64 / SUBDIVISION_PANELS as f64;
            let f_b = secular::eval_f_real(b, n)?;
            if f_a * f_b < 0.0 {
                found = Some((a, b));
                break;
            }
            a = b;
            f_a = f_b;
        }
        match found {
            Some((a, b)) => out.push(Bracket {
                n: n.get(),
                m,
                lo: a,
                hi: b,
            }),
            None => return Err(SpectrumError::BracketNotFound { n: n.get(), m }),
        }
    }
    Ok(out)
}

/// Bisection + Newton polish of a verified sign-change bracket of `F`.
///
/// Bisects to `bracket_width_tol`, then runs Newton with the analytic
/// derivative; steps longer than half the current bracket width (or
/// leaving it) are replaced by bisection. Falls back to pure bisection
/// on the residual if Newton stalls. Returns `(root, residual, F')`.
/// `m_label` only decorates errors.
pub(crate) fn refine_root(
    bracket_lo: f64,
    bracket_hi: f64,
    m_label: u32,
    n: TransverseIndex,
    config: &SolverConfig,
) -> Result<(f64, f64, f64), SpectrumError> {
    const RESIDUAL_TARGET: f64 = 1e-13;
    let (mut lo, mut hi) = (bracket_lo, bracket_hi);
    let mut f_lo = secular::eval_f_real(lo, n)?;

    while hi - lo > config.bracket_width_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = secular::eval_f_real(mid, n)?;
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut f_x = secular::eval_f_real(x, n)?;
    let mut best = (x, f_x.abs());
    for _ in 0..64 {
        if f_x == 0.0 {
            break;
        }
        // Keep the bracket current.
        if f_lo * f_x <= 0.0 {
            hi = x;
        } else {
            lo = x;
            f_lo = f_x;
        }
        let d = secular::eval_f_prime_real(x, n)?;
        let step = f_x / d;
        let newton = x - step;
        let x_next = if d == 0.0
            || !newton.is_finite()
            || newton <= lo
            || newton >= hi
            || step.abs() > 0.5 * (hi - lo)
        {
            0.5 * (lo + hi)
        } else {
            newton
        };
        if x_next == x {
            break;
        }
        let moved = (x_next - x).abs();
        x = x_next;
        f_x = secular::eval_f_real(x, n)?;
        if f_x.abs() < best.1 {
            best = (x, f_x.abs());
        }
        // Converged in x: any further motion is evaluation noise.
        if best.1 < RESIDUAL_TARGET && moved < 4.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    if best.1 < RESIDUAL_TARGET {
        let d = secular::eval_f_prime_real(best.0, n)?;
        return Ok((best.0, best.1, d));
    }
    x = best.0;
    f_x = secular::eval_f_real(x, n)?;

    // Pure bisection fallback on the residual.
    for _ in 0..200 {
        if f_x.abs() < RESIDUAL_TARGET {
            let d = secular::eval_f_prime_real(x, n)?;
            return Ok((x, f_x.abs(), d));
        }
        if f_lo * f_x <= 0.0 {
            hi = x;
        } else {
            lo = x;
            f_lo = f_x;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        x = mid;
        f_x = secular::eval_f_real(x, n)?;
    }
    if f_x.abs() < RESIDUAL_TARGET {
        let d = secular::eval_f_prime_real(x, n)?;
        return Ok((x, f_x.abs(), d));
    }
    Err(SpectrumError::NewtonDivergence {
        n: n.get(),
        m: m_label,
        residual: f_x.abs(),
    })
}

/// Solves the unperturbed problem for `m = -m_max ..= m_max`.
///
/// Returns `2 m_max + 1` eigenvalues in increasing `m` order: the zero
/// root exactly, the positive roots by bracketed polish, and the
/// negative roots by reflection (exact, since `F` is odd down to the
/// floating-point representation).
pub fn solve_unperturbed(
    n: TransverseIndex,
    m_max: u32,
    config: &SolverConfig,
) -> Result<Vec<Eigenvalue>, SpectrumError> {
    let zero = Complex64::new(0.0, 0.0);
    let mut positives = Vec::with_capacity(m_max as usize);
    if m_max >= 1 {
        for bracket in bracket_positive_roots(n, m_max, config)? {
            let (x, residual, derivative) =
                refine_root(bracket.lo, bracket.hi, bracket.m, n, config)?;
            positives.push(Eigenvalue {
                index: ModeIndex::new(n.get(), bracket.m as i32),
                delta: zero,
                value: Complex64::new(x, 0.0),
                residual,
                derivative: Complex64::new(derivative, 0.0),
                source: Source::Bracketed,
            });
        }
    }

    let mut out = Vec::with_capacity(2 * m_max as usize + 1);
    for ev in positives.iter().rev() {
        let lam = -ev.value.re;
        let residual = secular::eval_f_real(lam, n)?.abs();
        let derivative = secular::eval_f_prime_real(lam, n)?;
        out.push(Eigenvalue {
            index: ModeIndex::new(n.get(), -ev.index.m),
            delta: zero,
            value: Complex64::new(lam, 0.0),
            residual,
            derivative: Complex64::new(derivative, 0.0),
            source: Source::Symmetry,
        });
    }
    out.push(Eigenvalue {
        index: ModeIndex::new(n.get(), 0),
        delta: zero,
        value: zero,
        residual: secular::eval_f_real(0.0, n)?.abs(),
        derivative: Complex64::new(secular::eval_f_prime_real(0.0, n)?, 0.0),
        source: Source::Bracketed,
    });
    out.extend(positives);

    debug_assert!(out.windows(2).all(|w| w[0].value.re < w[1].value.re));
    Ok(out)
}

fn check_continuation_delta(delta: Complex64) -> Result<(), SpectrumError> {
    let norm = delta.norm();
    if norm > DELTA_VALIDATED_RADIUS + 1e-15 {
        return Err(SpectrumError::DeltaOutOfRange { delta, norm });
    }
    Ok(())
}

const NEWTON_MAX_ITER: usize = 50;
const MAX_HALVINGS: u32 = 12;

/// One complex Newton solve of `H(., delta) = 0` from a given seed.
fn newton_at_delta(
    mut lambda: Complex64,
    delta: Complex64,
    n: TransverseIndex,
    tol: f64,
) -> Option<(Complex64, f64, Complex64)> {
    for _ in 0..NEWTON_MAX_ITER {
        let h = secular::eval_h(lambda, delta, n).ok()?;
        let hp = secular::eval_h_prime(lambda, delta, n).ok()?;
        if h.norm() < tol {
            return Some((lambda, h.norm(), hp));
        }
        if hp.norm() == 0.0 {
            return None;
        }
        let next = lambda - h / hp;
        if !next.re.is_finite() || !next.im.is_finite() {
            return None;
        }
        if next == lambda {
            break;
        }
        lambda = next;
    }
    let h = secular::eval_h(lambda, delta, n).ok()?;
    if h.norm() < tol {
        let hp = secular::eval_h_prime(lambda, delta, n).ok()?;
        return Some((lambda, h.norm(), hp));
    }
    None
}

/// Tracks one eigenvalue from `seed.delta` to `delta_target` along a
/// straight segment in the complex `delta` plane.
///
/// The segment is walked in `steps` increments; each increment runs
/// complex Newton on `H(., delta)` seeded with the previous root. A
/// failed Newton solve halves the increment; twelve consecutive
/// halvings abort with [`SpectrumError::ContinuationStall`].
pub fn continue_to_delta(
    seed: &Eigenvalue,
    delta_target: Complex64,
    steps: u32,
    config: &SolverConfig,
) -> Result<Eigenvalue, SpectrumError> {
    assert!(steps >= 1, "continuation needs at least one step");
    check_continuation_delta(delta_target)?;
    if seed.residual >= config.residual_tol {
        return Err(SpectrumError::BadSeed("seed residual exceeds tolerance"));
    }
    if seed.derivative.norm() == 0.0 {
        return Err(SpectrumError::BadSeed("seed derivative vanishes"));
    }

    let n = seed.index.transverse();
    let start = seed.delta;
    let span = delta_target - start;
    let mut lambda = seed.value;
    let mut t = 0.0_f64;
    let base_dt = 1.0 / steps as f64;
    let mut dt = base_dt;
    let mut halvings = 0u32;

    while t < 1.0 {
        let t_next = (t + dt).min(1.0);
        if t_next <= t {
            // dt has shrunk below the spacing of t; no progress possible.
            return Err(SpectrumError::ContinuationStall {
                delta: start + span * t,
                halvings,
            });
        }
        let delta = if t_next == 1.0 {
            delta_target
        } else {
            start + span * t_next
        };
        match newton_at_delta(lambda, delta, n, config.residual_tol) {
            Some((root, _, _)) => {
                lambda = root;
                t = t_next;
                halvings = 0;
                dt = base_dt;
            }
            None => {
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(SpectrumError::ContinuationStall {
                        delta,
                        halvings: halvings - 1,
                    });
                }
                dt *= 0.5;
            }
        }
    }

    let h = secular::eval_h(lambda, delta_target, n)?;
    let hp = secular::eval_h_prime(lambda, delta_target, n)?;
    Ok(Eigenvalue {
        index: seed.index,
        delta: delta_target,
        value: lambda,
        residual: h.norm(),
        derivative: hp,
        source: Source::Continuation,
    })
}

/// One row of a `delta -> 0` convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub delta: Complex64,
    pub lambda_delta: Complex64,
    /// `|lambda_delta - lambda_0|`.
    pub error: f64,
}

/// Solves the seed `lambda_{n,m}` and tracks it to every `delta` in the
/// sequence, reporting `|lambda^delta - lambda|` per row. Rows keep the
/// caller's order; an empty sequence yields an empty table.
pub fn convergence_study(
    index: ModeIndex,
    delta_sequence: &[Complex64],
    config: &SolverConfig,
) -> Result<Vec<ConvergenceRow>, SpectrumError> {
    if delta_sequence.is_empty() {
        return Ok(Vec::new());
    }
    let seed = solve_mode(index, config)?;
    let mut rows = Vec::with_capacity(delta_sequence.len());
    for &delta in delta_sequence {
        let ev = continue_to_delta(&seed, delta, config.continuation_steps as u32, config)?;
        rows.push(ConvergenceRow {
            delta,
            lambda_delta: ev.value,
            error: (ev.value - seed.value).norm(),
        });
    }
    Ok(rows)
}

/// Solves the single unperturbed eigenvalue `lambda_{n,m}`.
pub fn solve_mode(index: ModeIndex, config: &SolverConfig) -> Result<Eigenvalue, SpectrumError> {
    let n = index.transverse();
    let all = solve_unperturbed(n, index.m.unsigned_abs(), config)?;
    Ok(all
        .into_iter()
        .find(|ev| ev.index == index)
        .expect("solve_unperturbed covers the requested m range"))
}

/// Solves all modes `n <= n_max`, `|m| <= m_max`; for `delta != 0` each
/// root is tracked there by continuation. Records are sorted by `(n, m)`.
pub fn solve_spectrum(
    n_max: u32,
    m_max: u32,
    delta: Complex64,
    config: &SolverConfig,
) -> Result<Vec<Eigenvalue>, SpectrumError> {
    let mut out = Vec::with_capacity((n_max * (2 * m_max + 1)) as usize);
    for nn in 1..=n_max {
        let seeds = solve_unperturbed(TransverseIndex::new(nn), m_max, config)?;
        if delta == Complex64::new(0.0, 0.0) {
            out.extend(seeds);
        } else {
            for seed in &seeds {
                out.push(continue_to_delta(
                    seed,
                    delta,
                    config.continuation_steps as u32,
                    config,
                )?);
            }
        }
    }
    out.sort_by_key(|ev| (ev.index.n, ev.index.m));
    Ok(out)
}

/// A group of mode indices sharing one spectral value within a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGroup {
    pub value: Complex64,
    pub members: Vec<ModeIndex>,
}

/// Groups eigenvalue records whose values coincide within `tol`
/// (presentation-level merge for assembling the spectrum across `n`;
/// records themselves stay per-(n, m)).
pub fn group_spectrum(eigenvalues: &[Eigenvalue], tol: f64) -> Vec<SpectrumGroup> {
    let mut sorted: Vec<&Eigenvalue> = eigenvalues.iter().collect();
    sorted.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .expect("eigenvalues are finite")
    });
    let mut groups: Vec<SpectrumGroup> = Vec::new();
    for ev in sorted {
        match groups.last_mut() {
            Some(g) if (ev.value - g.value).norm() <= tol => g.members.push(ev.index),
            _ => groups.push(SpectrumGroup {
                value: ev.value,
                members: vec![ev.index],
            }),
        }
    }
    groups
}
