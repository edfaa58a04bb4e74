//! Eigenfunction evaluation: 1D profiles `psi`, transverse factors
//! `chi`, 2D modes `f = psi * chi`, kernel functions, and the
//! closed-form normalization constants.
//!
//! The profile for a root `lambda` of `H(., delta)` is, up to a
//! constant,
//!
//! ```text
//!   psi(x) = sinh(z_p) sin(z_q (1-x)),  x > 0
//!   psi(x) = sin(z_q) sinh(z_p (1+x)),  x < 0
//! ```
//!
//! with `z_p = sqrt((1+delta) lambda + (n pi)^2)` and
//! `z_q = sqrt(lambda - (n pi)^2)`. Each factor is written as
//! `sin(sqrt(u) t)/sqrt(u)`, which is entire in `u`, so the evaluation
//! never depends on a square-root branch; the leftover `z_p z_q` factor
//! is a single global constant folded into the normalization. The two
//! half-line formulas then agree at `x = 0` to the last bit.
//!
//! Normalization uses the modulus-square form of the closed-form
//! `L^2(-1,1)` norm (the `delta`-family expression), which reduces to
//! the real unperturbed expression whenever `z_q` is real and stays a
//! genuine norm when it is not.

use crate::numerics::SolverConfig;
use crate::secular::{self, SecularError, SpectralPoint, TransverseIndex};
use crate::spectrum::{Eigenvalue, ModeIndex};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModesError {
    #[error("{coord} = {value} outside {domain}")]
    DomainError {
        coord: &'static str,
        value: f64,
        domain: &'static str,
    },
    /// The supplied `lambda` is not a root to working precision.
    #[error("secular residual {residual:.3e} at the supplied lambda exceeds {tol:.1e}")]
    RootResidualTooLarge { residual: f64, tol: f64 },
    #[error(transparent)]
    Secular(#[from] SecularError),
}

/// Index `k >= 1` of the kernel function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelModeIndex(u32);

impl KernelModeIndex {
    /// Panics if `k == 0`.
    pub fn new(k: u32) -> Self {
        assert!(k >= 1, "kernel index must satisfy k >= 1");
        Self(k)
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Everything needed to evaluate one eigenfunction: the mode index, the
/// verified root, the perturbation, and the normalization constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpec {
    index: ModeIndex,
    point: SpectralPoint,
    normalization: Complex64,
}

impl ModeSpec {
    /// Builds a spec from a root, verifying `|H(lambda, delta, n)|` is
    /// below the residual tolerance and computing the normalization.
    pub fn new(
        index: ModeIndex,
        lambda: Complex64,
        delta: Complex64,
        config: &SolverConfig,
    ) -> Result<Self, ModesError> {
        let normalization = normalization_constant(index, lambda, delta, config.residual_tol)?;
        let point = SpectralPoint::new(lambda, delta)?;
        Ok(Self {
            index,
            point,
            normalization,
        })
    }

    pub fn from_eigenvalue(ev: &Eigenvalue, config: &SolverConfig) -> Result<Self, ModesError> {
        Self::new(ev.index, ev.value, ev.delta, config)
    }

    pub fn index(&self) -> ModeIndex {
        self.index
    }

    pub fn lambda(&self) -> Complex64 {
        self.point.lambda()
    }

    pub fn delta(&self) -> Complex64 {
        self.point.delta()
    }

    pub fn normalization(&self) -> Complex64 {
        self.normalization
    }
}

/// Principal square root with the real-axis limit taken from above:
/// a signed negative zero in the imaginary part would land on the other
/// side of the branch cut, so it is normalized away first.
fn sqrt_upper(u: Complex64) -> Complex64 {
    let im = if u.im == 0.0 { 0.0 } else { u.im };
    Complex64::new(u.re, im).sqrt()
}

const SINC_SERIES_RADIUS: f64 = 1e-2;

/// `sin(sqrt(w))/sqrt(w)`, entire in `w` (limit 1 at `w = 0`).
fn cardinal_sin(w: Complex64) -> Complex64 {
    if w.norm() < SINC_SERIES_RADIUS {
        // sum (-w)^k / (2k+1)!
        let mut sum = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..20 {
            term *= -w / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        let z = sqrt_upper(w);
        z.sin() / z
    }
}

/// `sin(sqrt(u) t)/sqrt(u)`, entire in `u`.
fn scaled_sin(u: Complex64, t: f64) -> Complex64 {
    cardinal_sin(u * (t * t)) * t
}

/// `sinh(sqrt(u) t)/sqrt(u)`, entire in `u`.
fn scaled_sinh(u: Complex64, t: f64) -> Complex64 {
    cardinal_sin(-u * (t * t)) * t
}

/// Transverse factor `chi_n(y) = sqrt(2) sin(n pi y)` on `[0, 1]`.
pub fn chi(n: TransverseIndex, y: f64) -> Result<f64, ModesError> {
    if !(0.0..=1.0).contains(&y) {
        return Err(ModesError::DomainError {
            coord: "y",
            value: y,
            domain: "[0, 1]",
        });
    }
    Ok(std::f64::consts::SQRT_2 * (n.get() as f64 * PI * y).sin())
}

/// Evaluates the normalized 1D profile `psi` at `x` in `[-1, 1]`.
pub fn psi(spec: &ModeSpec, x: f64) -> Result<Complex64, ModesError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(ModesError::DomainError {
            coord: "x",
            value: x,
            domain: "[-1, 1]",
        });
    }
    let n = spec.index.transverse();
    let w = n.threshold();
    let lambda = spec.lambda();
    let delta = spec.delta();
    let u_p = (1.0 + delta) * lambda + w;
    let u_q = lambda - w;
    let prefactor = spec.normalization * sqrt_upper(u_p) * sqrt_upper(u_q);
    if x >= 0.0 {
        Ok(prefactor * scaled_sinh(u_p, 1.0) * scaled_sin(u_q, 1.0 - x))
    } else {
        Ok(prefactor * scaled_sin(u_q, 1.0) * scaled_sinh(u_p, 1.0 + x))
    }
}

// Removable-singularity threshold for sin(2a)/(4a), sinh(2a)/(4a).
const HALF_CARDINAL_SERIES_RADIUS: f64 = 1e-4;

/// `sinh(2a)/(4a)` with the removable limit `1/2` at `a = 0`.
fn sinh_half_cardinal(a: f64) -> f64 {
    if a.abs() < HALF_CARDINAL_SERIES_RADIUS {
        let a2 = a * a;
        0.5 + a2 / 3.0 + a2 * a2 / 15.0
    } else {
        (2.0 * a).sinh() / (4.0 * a)
    }
}

/// `sin(2a)/(4a)` with the removable limit `1/2` at `a = 0`.
fn sin_half_cardinal(a: f64) -> f64 {
    if a.abs() < HALF_CARDINAL_SERIES_RADIUS {
        let a2 = a * a;
        0.5 - a2 / 3.0 + a2 * a2 / 15.0
    } else {
        (2.0 * a).sin() / (4.0 * a)
    }
}

/// The closed-form normalization constant `N` (positive real phase
/// convention) making `psi` have unit `L^2(-1,1)` norm:
///
/// ```text
///   |N|^-2 = |sinh z_p|^2 [ sinh(2 Im z_q)/(4 Im z_q) - sin(2 Re z_q)/(4 Re z_q) ]
///          + |sin z_q|^2  [ sinh(2 Re z_p)/(4 Re z_p) - sin(2 Im z_p)/(4 Im z_p) ]
/// ```
///
/// which is even in both `z_p` and `z_q` separately, hence independent
/// of the square-root branches. For real `z_q` (the unperturbed
/// positive roots) it collapses to the familiar
/// `sinh^2 z_p [1/2 - sin(2 z_q)/(4 z_q)] + sin^2 z_q [sinh(2 z_p)/(4 z_p) - 1/2]`.
pub fn normalization_constant(
    index: ModeIndex,
    lambda: Complex64,
    delta: Complex64,
    residual_tol: f64,
) -> Result<Complex64, ModesError> {
    let n = index.transverse();
    let residual = secular::eval_h(lambda, delta, n)?.norm();
    if residual >= residual_tol {
        return Err(ModesError::RootResidualTooLarge {
            residual,
            tol: residual_tol,
        });
    }
    let w = n.threshold();
    let z_p = sqrt_upper((1.0 + delta) * lambda + w);
    let z_q = sqrt_upper(lambda - w);
    let t1 = z_p.sinh().norm_sqr() * (sinh_half_cardinal(z_q.im) - sin_half_cardinal(z_q.re));
    let t2 = z_q.sin().norm_sqr() * (sinh_half_cardinal(z_p.re) - sin_half_cardinal(z_p.im));
    let inv_sq = t1 + t2;
    debug_assert!(inv_sq > 0.0, "norm^2 must be positive, got {inv_sq}");
    Ok(Complex64::new(1.0 / inv_sq.sqrt(), 0.0))
}

/// The 2D eigenfunction `f(x, y) = psi(x) chi_n(y)` on `[-1,1] x [0,1]`.
pub fn f2d(spec: &ModeSpec, x: f64, y: f64) -> Result<Complex64, ModesError> {
    let transverse = chi(spec.index.transverse(), y)?;
    Ok(psi(spec, x)? * transverse)
}

/// Kernel function of the zero eigenspace:
/// `sinh(k pi (1 -/+ x)) sin(k pi y)` on the right/left half-rectangle.
/// Harmonic on each half, vanishing on the outer boundary, with
/// matching Dirichlet and Neumann data across the interface.
pub fn kernel_function(k: KernelModeIndex, x: f64, y: f64) -> Result<f64, ModesError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(ModesError::DomainError {
            coord: "x",
            value: x,
            domain: "[-1, 1]",
        });
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(ModesError::DomainError {
            coord: "y",
            value: y,
            domain: "[0, 1]",
        });
    }
    let kpi = k.get() as f64 * PI;
    let axial = if x >= 0.0 {
        (kpi * (1.0 - x)).sinh()
    } else {
        (kpi * (1.0 + x)).sinh()
    };
    Ok(axial * (kpi * y).sin())
}

#[cfg(test)]
mod tests {
    #![allow(clippy::excessive_precision)]

    use super::*;
    use crate::numerics::{self, integrate, one_sided_diff4};
    use crate::spectrum::{continue_to_delta, solve_mode};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn spec_for(n: u32, m: i32) -> ModeSpec {
        let ev = solve_mode(ModeIndex::new(n, m), &cfg()).unwrap();
        ModeSpec::from_eigenvalue(&ev, &cfg()).unwrap()
    }

    // 40-digit reference values computed beforehand.
    const N_1_1: f64 = 0.008_985_485_304_353_336_4;
    const N_1_0: f64 = 0.013_423_053_054_440_860_19;
    const INV_N_SQ_1_1_D01: f64 = 19_301.387_962_925_290_33;
    const INV_N_SQ_1_1_D005I: f64 = 12_408.159_945_387_653_73;

    #[test]
    fn chi_values_and_domain() {
        let n1 = TransverseIndex::new(1);
        assert_eq!(chi(n1, 0.0).unwrap(), 0.0);
        assert!((chi(n1, 0.5).unwrap() - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(chi(n1, 1.5).is_err());
        assert!(chi(n1, -0.1).is_err());
    }

    #[test]
    fn chi_is_normalized() {
        for nn in 1..=4 {
            let n = TransverseIndex::new(nn);
            let v =
                numerics::integrate_real(|y| chi(n, y).unwrap().powi(2), 0.0, 1.0, 1e-12).unwrap();
            assert!((v - 1.0).abs() < 1e-13, "n = {nn}: {v}");
        }
    }

    #[test]
    fn normalization_constants_match_reference() {
        let spec = spec_for(1, 1);
        assert!((spec.normalization().re - N_1_1).abs() < 1e-14);
        assert_eq!(spec.normalization().im, 0.0);
        let spec = spec_for(1, 0);
        assert!((spec.normalization().re - N_1_0).abs() < 1e-14);
    }

    #[test]
    fn normalization_rejects_non_roots() {
        let err = normalization_constant(
            ModeIndex::new(1, 1),
            Complex64::new(24.0, 0.0),
            Complex64::new(0.0, 0.0),
            1e-12,
        );
        assert!(matches!(err, Err(ModesError::RootResidualTooLarge { .. })));
    }

    #[test]
    fn psi_unit_norm_by_quadrature() {
        for (n, m) in [(1, 1), (1, 0), (2, 1), (1, -1), (3, 2)] {
            let spec = spec_for(n, m);
            let norm = integrate(
                |x| {
                    let v = psi(&spec, x).unwrap();
                    Complex64::new(v.norm_sqr(), 0.0)
                },
                -1.0,
                1.0,
                1e-12,
            )
            .unwrap();
            assert!(
                (norm.re - 1.0).abs() < 1e-8,
                "({n},{m}): |psi|^2 integrates to {}",
                norm.re
            );
        }
    }

    #[test]
    fn perturbed_normalization_matches_reference_and_quadrature() {
        let cfg = cfg();
        let seed = solve_mode(ModeIndex::new(1, 1), &cfg).unwrap();
        for (delta, reference) in [
            (Complex64::new(0.1, 0.0), INV_N_SQ_1_1_D01),
            (Complex64::new(0.0, 0.05), INV_N_SQ_1_1_D005I),
        ] {
            let ev = continue_to_delta(&seed, delta, 32, &cfg).unwrap();
            let spec = ModeSpec::from_eigenvalue(&ev, &cfg).unwrap();
            let inv_sq = 1.0 / spec.normalization().norm_sqr();
            assert!(
                (inv_sq - reference).abs() < 1e-6 * reference,
                "delta = {delta}: 1/N^2 = {inv_sq}"
            );
            let norm = integrate(
                |x| Complex64::new(psi(&spec, x).unwrap().norm_sqr(), 0.0),
                -1.0,
                1.0,
                1e-12,
            )
            .unwrap();
            assert!((norm.re - 1.0).abs() < 1e-8, "delta = {delta}: {}", norm.re);
        }
    }

    #[test]
    fn psi_dirichlet_endpoints_exact() {
        for (n, m) in [(1, 1), (1, 0), (2, -1)] {
            let spec = spec_for(n, m);
            assert_eq!(psi(&spec, 1.0).unwrap(), Complex64::new(0.0, 0.0));
            assert_eq!(psi(&spec, -1.0).unwrap(), Complex64::new(0.0, 0.0));
        }
        assert!(psi(&spec_for(1, 1), 1.0001).is_err());
    }

    #[test]
    fn psi_continuous_at_interface() {
        // Left and right formulas agree at the interface to the bit, and
        // to 1e-8 when approached from either side.
        let spec = spec_for(1, 1);
        let at0 = psi(&spec, 0.0).unwrap();
        let right = psi(&spec, 1e-9).unwrap();
        let left = psi(&spec, -1e-9).unwrap();
        assert!((right - at0).norm() < 1e-8);
        assert!((left - at0).norm() < 1e-8);
    }

    #[test]
    fn psi_interface_derivative_condition() {
        // psi'(0+) + psi'(0-) = 0 for delta = 0.
        let spec = spec_for(1, 1);
        let f = |x: f64| psi(&spec, x).unwrap();
        let right = one_sided_diff4(f, 0.0, 1e-4, 1.0);
        let left = one_sided_diff4(f, 0.0, 1e-4, -1.0);
        let scale = right.norm().max(left.norm());
        assert!(
            (right + left).norm() < 1e-10 * scale.max(1.0),
            "sum {:.3e} against scale {scale:.3}",
            (right + left).norm()
        );
    }

    #[test]
    fn psi_perturbed_interface_condition() {
        // (1 + delta) psi'(0+) + psi'(0-) = 0 for delta != 0.
        let cfg = cfg();
        let seed = solve_mode(ModeIndex::new(1, 1), &cfg).unwrap();
        for delta in [Complex64::new(0.1, 0.0), Complex64::new(0.02, 0.03)] {
            let ev = continue_to_delta(&seed, delta, 32, &cfg).unwrap();
            let spec = ModeSpec::from_eigenvalue(&ev, &cfg).unwrap();
            let f = |x: f64| psi(&spec, x).unwrap();
            let right = one_sided_diff4(f, 0.0, 1e-4, 1.0);
            let left = one_sided_diff4(f, 0.0, 1e-4, -1.0);
            let scale = right.norm().max(left.norm());
            let resid = ((1.0 + delta) * right + left).norm();
            assert!(
                resid < 1e-8 * scale,
                "delta = {delta}: residual {resid:.3e}"
            );
        }
    }

    #[test]
    fn kernel_mode_profile_matches_kernel_function() {
        // The zero mode is proportional to the kernel profile
        // sinh(n pi (1 -/+ x)); the ratio must be constant and the
        // profile reflection-symmetric.
        let spec = spec_for(1, 0);
        let k = KernelModeIndex::new(1);
        let mut ratio: Option<Complex64> = None;
        for i in 0..=40 {
            let x = -1.0 + 2.0 * i as f64 / 40.0;
            let a = psi(&spec, x).unwrap();
            let b =
                kernel_function(k, x, 0.5).unwrap() / chi(TransverseIndex::new(1), 0.5).unwrap();
            let mirrored = psi(&spec, -x).unwrap();
            assert!((a - mirrored).norm() < 1e-10 * (1.0 + a.norm()));
            if b.abs() > 1e-9 {
                let r = a / b;
                if let Some(prev) = ratio {
                    assert!((r - prev).norm() < 1e-9 * prev.norm());
                }
                ratio = Some(r);
            }
        }
        assert!(ratio.is_some());
    }

    #[test]
    fn psi_ode_residual() {
        // Five-point second differences reproduce the two half-line ODEs.
        let spec = spec_for(2, 1);
        let lam = spec.lambda();
        let w = spec.index().transverse().threshold();
        let f = |x: f64| psi(&spec, x).unwrap();
        let sup = (0..=100)
            .map(|i| f(-1.0 + 0.02 * i as f64).norm())
            .fold(0.0_f64, f64::max);
        let h = 1e-3;
        for &x in &[0.15, 0.4, 0.77] {
            let resid = -numerics::second_diff_5pt(f, x, h) - (lam - w) * f(x);
            assert!(
                resid.norm() < 1e-6 * sup,
                "right residual {:.3e}",
                resid.norm()
            );
        }
        for &x in &[-0.8, -0.33, -0.1] {
            let resid = numerics::second_diff_5pt(f, x, h) - (lam + w) * f(x);
            assert!(
                resid.norm() < 1e-6 * sup,
                "left residual {:.3e}",
                resid.norm()
            );
        }
    }

    #[test]
    fn f2d_boundary_and_norm() {
        // x = +/-1 and y = 0 vanish exactly; y = 1 only up to the
        // floating-point sin(n pi).
        let spec = spec_for(1, 1);
        for i in 0..=15 {
            let t = i as f64 / 15.0;
            assert_eq!(f2d(&spec, -1.0, t).unwrap(), Complex64::new(0.0, 0.0));
            assert_eq!(f2d(&spec, 1.0, t).unwrap(), Complex64::new(0.0, 0.0));
            let x = -1.0 + 2.0 * t;
            assert_eq!(f2d(&spec, x, 0.0).unwrap(), Complex64::new(0.0, 0.0));
            assert!(f2d(&spec, x, 1.0).unwrap().norm() < 1e-12);
        }
        assert!(f2d(&spec, 0.0, 1.2).is_err());
    }

    #[test]
    fn f2d_two_dimensional_norm() {
        // Genuine tensor quadrature of |f_{1,1}|^2 over the rectangle,
        // driven through f2d itself.
        let spec = spec_for(1, 1);
        let x_rule_left = numerics::gauss_legendre_rule(64, -1.0, 0.0);
        let x_rule_right = numerics::gauss_legendre_rule(64, 0.0, 1.0);
        let y_rule = numerics::gauss_legendre_rule(64, 0.0, 1.0);
        let mut total = 0.0;
        for rule in [&x_rule_left, &x_rule_right] {
            for (&x, &wx) in rule.nodes().iter().zip(rule.weights()) {
                for (&y, &wy) in y_rule.nodes().iter().zip(y_rule.weights()) {
                    total += f2d(&spec, x, y).unwrap().norm_sqr() * wx * wy;
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-7, "2D norm {total}");
    }

    #[test]
    fn kernel_function_interface_and_boundary() {
        let k = KernelModeIndex::new(1);
        for i in 1..10 {
            let y = i as f64 / 10.0;
            let right = kernel_function(k, 1e-12, y).unwrap();
            let left = kernel_function(k, -1e-12, y).unwrap();
            assert!((right - left).abs() < 1e-9);
            assert!((right - PI.sinh() * (PI * y).sin()).abs() < 1e-9);
            assert_eq!(kernel_function(k, 1.0, y).unwrap(), 0.0);
            assert_eq!(kernel_function(k, -1.0, y).unwrap(), 0.0);
        }
        assert!(kernel_function(k, 1.5, 0.5).is_err());
    }

    #[test]
    #[should_panic(expected = "k >= 1")]
    fn kernel_index_rejects_zero() {
        let _ = KernelModeIndex::new(0);
    }
}
