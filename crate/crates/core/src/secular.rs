//! Branch-free evaluation of the secular functions.
//!
//! Everything is built on the single meromorphic kernel
//!
//! ```text
//!   g(u) = tan(sqrt(u)) / sqrt(u)
//! ```
//!
//! which is even in `sqrt(u)` and therefore a genuine single-valued
//! function of `u`: no branch of the square root can change its value.
//! The hyperbolic side needs no separate code path because
//! `tanh(sqrt(w))/sqrt(w) = g(-w)`. The secular function of the
//! unperturbed problem and its one-parameter perturbation are then
//!
//! ```text
//!   F(lambda)        = g(-(lambda + (n pi)^2)) - g(lambda - (n pi)^2)
//!   H(lambda, delta) = (1 + delta) g(-((1 + delta) lambda + (n pi)^2))
//!                      - g(lambda - (n pi)^2)
//! ```
//!
//! with `H(lambda, 0) = F(lambda)` holding exactly, down to the floating
//! point representation. `g` has poles at `u = ((k + 1/2) pi)^2`; all
//! entry points reject arguments inside a small exclusion radius around
//! them instead of returning garbage.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

/// Default exclusion radius (in `u`-distance) around the poles of `g`.
pub const DEFAULT_POLE_EXCLUSION: f64 = 1e-8;

/// Below this `|u|` the Maclaurin series of `g` is used instead of the
/// closed trigonometric form, avoiding cancellation near `u = 0`.
pub const SERIES_RADIUS: f64 = 1e-2;

/// Once `|Im sqrt(u)|` exceeds this, `tan(sqrt(u))` has saturated to
/// `+/- i` within double precision and the closed form would overflow
/// internally; the saturated value is used directly.
const OVERFLOW_GUARD: f64 = 350.0;

/// Largest magnitude the continuation modules accept for `delta`;
/// the perturbation analysis is only validated on this disk.
pub const DELTA_VALIDATED_RADIUS: f64 = 0.38;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SecularError {
    /// Argument of `g` within the exclusion radius of a pole.
    #[error("argument {u} within {radius:.1e} of the tan pole at ((k+1/2)pi)^2, k = {k}")]
    PoleProximity { u: Complex64, k: u32, radius: f64 },
    /// `|delta| >= 1` puts the coefficient outside the admissible family.
    #[error("|delta| = {norm:.6} >= 1 (delta = {delta})")]
    DeltaOutOfRange { delta: Complex64, norm: f64 },
    /// Real-domain function called outside its interval.
    #[error("lambda = {lambda} outside [0, (n pi)^2) for n = {n}")]
    DomainError { lambda: f64, n: u32 },
    /// A real-input entry point produced a result with a non-negligible
    /// imaginary part; indicates a mis-use or an internal bug.
    #[error("real evaluation left imaginary residue {imag:.3e} against magnitude {mag:.3e}")]
    NotReal { imag: f64, mag: f64 },
}

/// Transverse mode number `n >= 1` of the Dirichlet factor `sin(n pi y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransverseIndex(u32);

impl TransverseIndex {
    /// Panics if `n == 0`; the transverse index starts at 1.
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "transverse index must satisfy n >= 1");
        Self(n)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `(n pi)^2`, the transverse threshold this mode contributes.
    pub fn threshold(self) -> f64 {
        let npi = self.0 as f64 * PI;
        npi * npi
    }
}

impl std::fmt::Display for TransverseIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A spectral parameter paired with an admissible contrast perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    lambda: Complex64,
    delta: Complex64,
}

impl SpectralPoint {
    pub fn new(lambda: Complex64, delta: Complex64) -> Result<Self, SecularError> {
        check_delta(delta)?;
        Ok(Self { lambda, delta })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }
}

fn check_delta(delta: Complex64) -> Result<(), SecularError> {
    let norm = delta.norm();
    if norm.is_nan() || norm >= 1.0 {
        return Err(SecularError::DeltaOutOfRange { delta, norm });
    }
    Ok(())
}

// Maclaurin coefficients of g: g(u) = sum a_k u^k, from the tangent ODE
// t' = 1 + t^2, which gives (2k+1) a_k = sum_{i+j=k-1} a_i a_j, a_0 = 1.
const G_SERIES_LEN: usize = 64;

fn g_series_coeffs() -> &'static [f64; G_SERIES_LEN] {
    static COEFFS: OnceLock<[f64; G_SERIES_LEN]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut a = [0.0_f64; G_SERIES_LEN];
        a[0] = 1.0;
        for k in 1..G_SERIES_LEN {
            let mut s = 0.0;
            for i in 0..k {
                s += a[i] * a[k - 1 - i];
            }
            a[k] = s / (2 * k + 1) as f64;
        }
        a
    })
}

const SERIES_TERM_CUTOFF: f64 = 1e-18;

/// `g` by its Maclaurin series, truncated once terms drop below 1e-18.
/// The stored 64 coefficients keep it accurate through `|u| <= 1`; the
/// dispatch uses it for `|u| < 1e-2` and it stays exposed for the
/// series/closed-form consistency checks.
pub fn g_series(u: Complex64) -> Complex64 {
    let a = g_series_coeffs();
    let mut sum = Complex64::new(a[0], 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for &ak in &a[1..] {
        pow *= u;
        let term = pow * ak;
        sum += term;
        if term.norm() < SERIES_TERM_CUTOFF {
            break;
        }
    }
    sum
}

/// Derivative of the series: `g'(u) = sum k a_k u^(k-1)`.
fn g_prime_series(u: Complex64) -> Complex64 {
    let a = g_series_coeffs();
    let mut sum = Complex64::new(a[1], 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for (k, &ak) in a.iter().enumerate().skip(2) {
        pow *= u;
        let term = pow * (k as f64 * ak);
        sum += term;
        if term.norm() < SERIES_TERM_CUTOFF {
            break;
        }
    }
    sum
}

/// `g` by the closed trigonometric form `tan(sqrt(u))/sqrt(u)`.
///
/// The principal square root is fine here: `tan(z)/z` is even in `z`.
/// Exposed for the series/closed-form consistency checks.
pub fn g_closed(u: Complex64) -> Complex64 {
    let z = u.sqrt();
    if z.im.abs() > OVERFLOW_GUARD {
        // tan has saturated to +/- i; sinh/cosh would overflow.
        return Complex64::new(0.0, z.im.signum()) / z;
    }
    z.tan() / z
}

fn g_prime_closed(u: Complex64) -> Complex64 {
    let z = u.sqrt();
    if z.im.abs() > OVERFLOW_GUARD {
        // 1 + tan^2 is double-exponentially small there.
        let g = Complex64::new(0.0, z.im.signum()) / z;
        return -g / (2.0 * u);
    }
    let t = z.tan();
    (1.0 + t * t - t / z) / (2.0 * u)
}

/// Index of the nearest pole `((k+1/2) pi)^2` and the distance to it.
fn nearest_pole(u: Complex64) -> (u32, f64) {
    let re = u.re.max(0.0);
    let k_est = (re.sqrt() / PI - 0.5).round();
    let k_lo = if k_est < 1.0 { 0 } else { k_est as u32 - 1 };
    let mut best = (0u32, f64::INFINITY);
    for k in k_lo..=k_lo + 2 {
        let p = ((k as f64 + 0.5) * PI).powi(2);
        let d = (u - p).norm();
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

fn check_pole(u: Complex64, radius: f64) -> Result<(), SecularError> {
    // Poles sit on the positive real axis; skip the search when the
    // argument is safely away from it.
    if u.re > -radius && u.im.abs() < radius {
        let (k, d) = nearest_pole(u);
        if d < radius {
            return Err(SecularError::PoleProximity { u, k, radius });
        }
    }
    Ok(())
}

/// Evaluates `g(u) = tan(sqrt(u))/sqrt(u)` as a single-valued function
/// of `u`, with `g(-w) = tanh(sqrt(w))/sqrt(w)`.
///
/// Dispatches to the Maclaurin series for `|u| < 1e-2` and to the closed
/// form elsewhere; rejects arguments within [`DEFAULT_POLE_EXCLUSION`]
/// of a pole.
pub fn eval_g(u: Complex64) -> Result<Complex64, SecularError> {
    eval_g_with_exclusion(u, DEFAULT_POLE_EXCLUSION)
}

/// [`eval_g`] with a caller-chosen pole-exclusion radius.
pub fn eval_g_with_exclusion(u: Complex64, radius: f64) -> Result<Complex64, SecularError> {
    check_pole(u, radius)?;
    if u.norm() < SERIES_RADIUS {
        Ok(g_series(u))
    } else {
        Ok(g_closed(u))
    }
}

/// `dg/du`, by the term-by-term series derivative near zero and the
/// closed form `(1 + tan^2(z) - g)/(2u)` with `z = sqrt(u)` elsewhere.
pub fn eval_g_prime(u: Complex64) -> Result<Complex64, SecularError> {
    check_pole(u, DEFAULT_POLE_EXCLUSION)?;
    if u.norm() < SERIES_RADIUS {
        Ok(g_prime_series(u))
    } else {
        Ok(g_prime_closed(u))
    }
}

/// The secular function `F(lambda) = g(-(lambda+w)) - g(lambda-w)` with
/// `w = (n pi)^2`; its roots are exactly the eigenvalues for this `n`.
pub fn eval_f(lambda: Complex64, n: TransverseIndex) -> Result<Complex64, SecularError> {
    let w = n.threshold();
    Ok(eval_g(-(lambda + w))? - eval_g(lambda - w)?)
}

/// `dF/dlambda = -g'(-(lambda+w)) - g'(lambda-w)`.
pub fn eval_f_prime(lambda: Complex64, n: TransverseIndex) -> Result<Complex64, SecularError> {
    let w = n.threshold();
    Ok(-eval_g_prime(-(lambda + w))? - eval_g_prime(lambda - w)?)
}

/// The perturbed secular function
/// `H(lambda, delta) = (1+delta) g(-((1+delta) lambda + w)) - g(lambda - w)`.
pub fn eval_h(
    lambda: Complex64,
    delta: Complex64,
    n: TransverseIndex,
) -> Result<Complex64, SecularError> {
    check_delta(delta)?;
    let w = n.threshold();
    let one_plus = 1.0 + delta;
    Ok(one_plus * eval_g(-(one_plus * lambda + w))? - eval_g(lambda - w)?)
}

/// `dH/dlambda = -(1+delta)^2 g'(-((1+delta) lambda + w)) - g'(lambda - w)`.
pub fn eval_h_prime(
    lambda: Complex64,
    delta: Complex64,
    n: TransverseIndex,
) -> Result<Complex64, SecularError> {
    check_delta(delta)?;
    let w = n.threshold();
    let one_plus = 1.0 + delta;
    Ok(-one_plus * one_plus * eval_g_prime(-(one_plus * lambda + w))? - eval_g_prime(lambda - w)?)
}

const REAL_RESIDUE_TOL: f64 = 1e-12;

fn take_real(v: Complex64) -> Result<f64, SecularError> {
    let mag = v.norm();
    if v.im.abs() > REAL_RESIDUE_TOL * mag.max(1.0) {
        return Err(SecularError::NotReal { imag: v.im, mag });
    }
    Ok(v.re)
}

/// Real-axis wrapper around [`eval_f`].
pub fn eval_f_real(lambda: f64, n: TransverseIndex) -> Result<f64, SecularError> {
    take_real(eval_f(Complex64::new(lambda, 0.0), n)?)
}

/// Real-axis wrapper around [`eval_f_prime`].
pub fn eval_f_prime_real(lambda: f64, n: TransverseIndex) -> Result<f64, SecularError> {
    take_real(eval_f_prime(Complex64::new(lambda, 0.0), n)?)
}

/// The gap function
/// `G(lambda) = sqrt(lambda+w)/tanh(sqrt(lambda+w)) - sqrt(w-lambda)/tanh(sqrt(w-lambda))`
/// on `[0, w)`, `w = (n pi)^2`.
///
/// `G(0) = 0` exactly and `G` is strictly increasing, which is what rules
/// out eigenvalues in `(0, (n pi)^2)`. Evaluated as `1/g(-(lambda+w)) -
/// 1/g(lambda-w)`, reusing the entire kernel (`g > 0` on the negative
/// real axis, so the reciprocals are safe).
pub fn eval_gap(lambda: f64, n: TransverseIndex) -> Result<f64, SecularError> {
    let w = n.threshold();
    if !(0.0..w).contains(&lambda) {
        return Err(SecularError::DomainError { lambda, n: n.get() });
    }
    let plus = eval_g(Complex64::new(-(lambda + w), 0.0))?;
    let minus = eval_g(Complex64::new(lambda - w, 0.0))?;
    take_real(1.0 / plus - 1.0 / minus)
}

/// Residuals of the two compatibility conditions that would admit the
/// exceptional roots `lambda = (n pi)^2` and `lambda = -(n pi)^2/(1+delta)`:
///
/// ```text
///   r1 = tanh(s1)/s1 - 1/(1+delta),   s1 = sqrt((2+delta) w)
///   r2 = tanh(s2)/s2 - (1+delta),     s2 = sqrt(((2+delta)/(1+delta)) w)
/// ```
///
/// Both staying away from zero certifies the exceptional solutions are
/// absent for that `delta`.
pub fn compatibility_residuals(
    delta: Complex64,
    n: TransverseIndex,
) -> Result<(Complex64, Complex64), SecularError> {
    check_delta(delta)?;
    let w = n.threshold();
    let one_plus = 1.0 + delta;
    let r1 = eval_g(-((2.0 + delta) * w))? - 1.0 / one_plus;
    let r2 = eval_g(-((2.0 + delta) / one_plus) * w)? - one_plus;
    Ok((r1, r2))
}

/// The constant `(1/pi) (sinh(2 pi) + 1) / (cosh(2 pi) - 1)` appearing in
/// the exceptional-solution exclusion bound; approximately 0.3207.
pub fn compatibility_reference_constant() -> f64 {
    ((2.0 * PI).sinh() + 1.0) / (((2.0 * PI).cosh() - 1.0) * PI)
}
