//! Shared numerical utilities: Gauss-Legendre quadrature with order
//! doubling, finite differences, and Richardson order estimation.
//!
//! Everything here is deliberately independent of the secular machinery:
//! these routines serve as the oracles that cross-check it.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    /// Order doubling hit the cap without the estimates settling.
    #[error("quadrature did not converge at order {order} (last delta {delta:.3e})")]
    NoConvergence { order: usize, delta: f64 },
    /// Input unusable for a slope fit.
    #[error("degenerate input for order estimation: {0}")]
    DegenerateInput(&'static str),
}

/// Tolerances, grid sizes and scan limits shared by the solver modules.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Accepted secular residual `|H|` at a root.
    pub residual_tol: f64,
    /// Bisection stops once the bracket is this narrow.
    pub bracket_width_tol: f64,
    /// Relative tolerance for adaptive quadrature.
    pub quad_rel_tol: f64,
    /// Minimum allowed distance (in the argument of `g`) to a pole.
    pub pole_exclusion: f64,
    /// Grid sizes for the finite-difference oracle; must all be even so
    /// the interface `x = 0` falls on a grid node.
    pub fd_grid_sizes: Vec<usize>,
    /// Number of straight-segment increments for delta continuation.
    pub continuation_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-12,
            bracket_width_tol: 1e-8,
            quad_rel_tol: 1e-10,
            pole_exclusion: 1e-8,
            fd_grid_sizes: vec![400, 800, 1600],
            continuation_steps: 32,
        }
    }
}

impl SolverConfig {
    /// Checks the invariants: positive tolerances, even grid sizes.
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("bracket_width_tol", self.bracket_width_tol),
            ("quad_rel_tol", self.quad_rel_tol),
            ("pole_exclusion", self.pole_exclusion),
        ] {
            if v.is_nan() || v <= 0.0 {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.continuation_steps == 0 {
            return Err("continuation_steps must be positive".into());
        }
        for &n in &self.fd_grid_sizes {
            if n % 2 != 0 {
                return Err(format!(
                    "fd grid size {n} is odd; the interface must be a node"
                ));
            }
        }
        Ok(())
    }
}

/// Nodes and weights of a Gauss-Legendre rule mapped to an interval.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: (f64, f64),
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// Applies the rule to a complex-valued integrand.
    pub fn apply<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// Applies the rule to a real-valued integrand.
    pub fn apply_real<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Builds the `order`-point Gauss-Legendre rule on `(a, b)`.
///
/// Nodes are the roots of the Legendre polynomial `P_order`, found by
/// Newton iteration from the Chebyshev-like initial guess; weights from
/// `w_i = 2 / ((1 - x_i^2) P'_order(x_i)^2)`. The rule is symmetrized
/// about the midpoint so paired nodes mirror exactly.
pub fn gauss_legendre_rule(order: usize, a: f64, b: f64) -> QuadratureRule {
    assert!(order >= 1, "quadrature order must be at least 1");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];

    // Roots come in +/- pairs; compute the upper half and mirror.
    let half = n / 2 + n % 2;
    for i in 0..half {
        // i-th root counted from the right end, standard initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n-1}(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            if n == 1 {
                // P_1' = 1; the generic formula divides by x^2-1 = -1 at x=0
                dp = 1.0;
            }
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    // Map from (-1,1) to (a,b).
    let mid = 0.5 * (a + b);
    let scale = 0.5 * (b - a);
    for i in 0..n {
        nodes[i] = mid + scale * nodes[i];
        weights[i] *= scale;
    }
    QuadratureRule {
        nodes,
        weights,
        interval: (a, b),
    }
}

const QUAD_ORDER_START: usize = 16;
const QUAD_ORDER_CAP: usize = 1024;

/// Adaptive (order-doubling) Gauss-Legendre integration of a
/// complex-valued integrand over `[a, b]`.
///
/// When the interval straddles `x = 0` it is split there first: the
/// integrands in this crate are smooth on each half-rectangle but may
/// have a derivative kink at the interface. Doubling starts at order 16
/// and stops once two successive estimates agree to `rel_tol` relative
/// to the estimate plus the L1 mass of the integrand; errors out at
/// order 1024 rather than silently accepting a stale value.
pub fn integrate<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<Complex64, NumericsError>
where
    F: FnMut(f64) -> Complex64,
{
    if a < 0.0 && 0.0 < b {
        let left = integrate_no_split(&mut f, a, 0.0, rel_tol)?;
        let right = integrate_no_split(&mut f, 0.0, b, rel_tol)?;
        return Ok(left + right);
    }
    integrate_no_split(&mut f, a, b, rel_tol)
}

fn integrate_no_split<F>(
    f: &mut F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Complex64, NumericsError>
where
    F: FnMut(f64) -> Complex64,
{
    let mut order = QUAD_ORDER_START;
    let rule = gauss_legendre_rule(order, a, b);
    let mut prev = {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc += f(x) * w;
        }
        acc
    };
    let mut last_delta = f64::INFINITY;
    while order < QUAD_ORDER_CAP {
        order *= 2;
        let rule = gauss_legendre_rule(order, a, b);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(x);
            acc += v * w;
            l1 += v.norm() * w;
        }
        last_delta = (acc - prev).norm();
        // The L1 term keeps the criterion meaningful for integrals that
        // are exactly zero (orthogonality pairs).
        if last_delta <= rel_tol * (acc.norm() + l1) {
            return Ok(acc);
        }
        prev = acc;
    }
    Err(NumericsError::NoConvergence {
        order,
        delta: last_delta,
    })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Complex64::new(f(x), 0.0), a, b, rel_tol).map(|v| v.re)
}

/// Least-squares slope of `log e` against `log h`: the empirical
/// convergence order of a sequence of errors at decreasing step sizes.
///
/// An exactly-zero error is treated as "converged to machine zero" and
/// reported as the `+inf` sentinel.
pub fn richardson_order(samples: &[(f64, f64)]) -> Result<f64, NumericsError> {
    if samples.len() < 2 {
        return Err(NumericsError::DegenerateInput(
            "need at least two (h, e) samples",
        ));
    }
    for win in samples.windows(2) {
        if win[1].0 >= win[0].0 {
            return Err(NumericsError::DegenerateInput(
                "h must be strictly decreasing",
            ));
        }
    }
    for &(h, e) in samples {
        if h <= 0.0 || e < 0.0 || !h.is_finite() || !e.is_finite() {
            return Err(NumericsError::DegenerateInput(
                "h must be positive, e nonnegative",
            ));
        }
        if e == 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, e) in samples {
        let x = h.ln();
        let y = e.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Central difference `(f(x+h) - f(x-h)) / (2h)`.
pub fn central_diff<F>(mut f: F, x: f64, h: f64) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Fourth-order one-sided first derivative at `x`, stepping into the
/// half-line `x + side*h, x + 2*side*h, ...` (`side` is `+1.0` or `-1.0`).
///
/// Used for interface checks where the function is analytic on each side
/// of `x = 0` but only continuous across it.
pub fn one_sided_diff4<F>(mut f: F, x: f64, h: f64, side: f64) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let s = side.signum();
    let f0 = f(x);
    let f1 = f(x + s * h);
    let f2 = f(x + 2.0 * s * h);
    let f3 = f(x + 3.0 * s * h);
    let f4 = f(x + 4.0 * s * h);
    (f0 * -25.0 + f1 * 48.0 + f2 * -36.0 + f3 * 16.0 + f4 * -3.0) * (s / (12.0 * h))
}

/// Fourth-order central second derivative (5-point stencil).
pub fn second_diff_5pt<F>(mut f: F, x: f64, h: f64) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let fm2 = f(x - 2.0 * h);
    let fm1 = f(x - h);
    let f0 = f(x);
    let fp1 = f(x + h);
    let fp2 = f(x + 2.0 * h);
    (fm2 * -1.0 + fm1 * 16.0 + f0 * -30.0 + fp1 * 16.0 + fp2 * -1.0) / (12.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn order_one_is_midpoint_rule() {
        let rule = gauss_legendre_rule(1, -1.0, 1.0);
        assert_eq!(rule.nodes(), &[0.0]);
        assert!((rule.weights()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn order_five_integrates_degree_eight_exactly() {
        let rule = gauss_legendre_rule(5, -1.0, 1.0);
        let v = rule.apply_real(|x| x.powi(8));
        assert!((v - 2.0 / 9.0).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn order_twenty_sin_squared() {
        let rule = gauss_legendre_rule(20, 0.0, 1.0);
        let v = rule.apply_real(|y| (PI * y).sin().powi(2));
        assert!((v - 0.5).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for order in [1, 2, 3, 7, 16, 33, 64, 128, 1024] {
            let rule = gauss_legendre_rule(order, -1.0, 1.0);
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "order {order}: sum {sum}");
            let rule = gauss_legendre_rule(order, 0.25, 3.5);
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 3.25).abs() < 1e-13, "order {order}: sum {sum}");
        }
    }

    #[test]
    fn nodes_strictly_increasing_inside_interval() {
        for order in [2, 5, 16, 129] {
            let rule = gauss_legendre_rule(order, -1.0, 1.0);
            for pair in rule.nodes().windows(2) {
                assert!(pair[0] < pair[1]);
            }
            assert!(rule.nodes()[0] > -1.0);
            assert!(*rule.nodes().last().unwrap() < 1.0);
        }
    }

    #[test]
    fn integrate_constant() {
        let v = integrate_real(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_splits_at_kink() {
        // |x| has a kink at 0; the split makes each half polynomial-exact.
        let v = integrate_real(|x| x.abs(), -1.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "got {v}");
        // Contrast: the same kink interior to a panel (no split there)
        // cannot reach a tight tolerance and must fail loudly.
        let r = integrate_real(|x| (x - 0.3).abs(), 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(NumericsError::NoConvergence { .. })));
    }

    #[test]
    fn integrate_oscillatory() {
        let v = integrate(
            |x| Complex64::new((10.0 * x).cos(), (3.0 * x).sin()),
            0.0,
            2.0,
            1e-12,
        )
        .unwrap();
        let expect_re = (20.0f64).sin() / 10.0;
        let expect_im = (1.0 - (6.0f64).cos()) / 3.0;
        assert!((v.re - expect_re).abs() < 1e-13);
        assert!((v.im - expect_im).abs() < 1e-13);
    }

    #[test]
    fn richardson_synthetic_second_order() {
        let samples: Vec<(f64, f64)> = (0..5)
            .map(|k| {
                let h = 0.1 / 2f64.powi(k);
                (h, 3.7 * h * h)
            })
            .collect();
        let p = richardson_order(&samples).unwrap();
        assert!((p - 2.0).abs() < 1e-6, "got {p}");
    }

    #[test]
    fn richardson_single_pair_is_two_point_slope() {
        let samples = [(0.1, 1e-3), (0.05, 2.5e-4)];
        let p = richardson_order(&samples).unwrap();
        let expect = (1e-3f64 / 2.5e-4).ln() / (0.1f64 / 0.05).ln();
        assert!((p - expect).abs() < 1e-12);
    }

    #[test]
    fn richardson_zero_error_is_infinite_order() {
        let p = richardson_order(&[(0.1, 1e-3), (0.05, 0.0)]).unwrap();
        assert!(p.is_infinite());
    }

    #[test]
    fn richardson_rejects_bad_input() {
        assert!(richardson_order(&[(0.1, 1e-3)]).is_err());
        assert!(richardson_order(&[(0.1, 1e-3), (0.2, 1e-4)]).is_err());
        assert!(richardson_order(&[(0.1, 1e-3), (0.05, -1.0)]).is_err());
    }

    #[test]
    fn finite_difference_helpers() {
        let f = |x: f64| Complex64::new((2.0 * x).sin(), x * x * x);
        let d = central_diff(f, 0.4, 1e-6);
        assert!((d.re - 2.0 * (0.8f64).cos()).abs() < 1e-9);
        assert!((d.im - 3.0 * 0.16).abs() < 1e-9);

        let d = one_sided_diff4(f, 0.4, 1e-3, 1.0);
        assert!((d.re - 2.0 * (0.8f64).cos()).abs() < 1e-10);
        let d = one_sided_diff4(f, 0.4, 1e-3, -1.0);
        assert!((d.re - 2.0 * (0.8f64).cos()).abs() < 1e-10);

        let d2 = second_diff_5pt(f, 0.4, 1e-3);
        assert!((d2.re + 4.0 * (0.8f64).sin()).abs() < 1e-9);
        assert!((d2.im - 6.0 * 0.4).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let cfg = SolverConfig {
            fd_grid_sizes: vec![401],
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SolverConfig {
            residual_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
