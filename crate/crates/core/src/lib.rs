//! Spectrum and eigenfunctions of the indefinite Laplacian on a rectangle.
//!
//! The operator is `-div(sgn grad)` on `(-1,1) x (0,1)` with Dirichlet
//! boundary conditions, where the coefficient `sgn` is `+1` on the right
//! half and `-1` on the left half. Separation of variables reduces the
//! eigenvalue problem to a family of transcendental secular equations in
//! the spectral parameter `lambda`, one per transverse mode number `n`:
//!
//! ```text
//!   tanh(sqrt(lambda + (n pi)^2)) / sqrt(lambda + (n pi)^2)
//!     = tan(sqrt(lambda - (n pi)^2)) / sqrt(lambda - (n pi)^2)
//! ```
//!
//! together with a one-complex-parameter perturbation `H(lambda, delta)`
//! covering both a real-contrast family and a lossy (complex) family.
//!
//! Module layout:
//!
//! - [`secular`]: branch-free evaluation of the secular functions
//!   `F`, `H`, the gap function `G`, their derivatives, and the
//!   compatibility residuals, all as entire functions of their arguments.
//! - [`spectrum`]: bracketing/Newton root location for `delta = 0`,
//!   complex Newton continuation in `delta`, convergence studies.
//! - [`modes`]: eigenfunction evaluation (1D profiles, transverse
//!   factors, 2D modes, kernel functions) and closed-form normalization.
//! - [`numerics`]: Gauss-Legendre quadrature with order doubling,
//!   finite differences, Richardson order estimation; the independent
//!   oracles used by the validation suite.
//! - [`fd_oracle`]: flux-form finite-difference discretization of the
//!   1D transmission problem with a from-scratch Sturm-sequence
//!   bisection eigensolver; the brute-force cross-check.
//! - [`validate`]: the aggregated check suite driven by the CLI and the
//!   acceptance tests.

pub mod fd_oracle;
pub mod modes;
pub mod numerics;
pub mod secular;
pub mod spectrum;
pub mod validate;

pub use fd_oracle::{OracleSpectrum, TridiagonalMatrix};
pub use modes::{KernelModeIndex, ModeSpec};
pub use numerics::{QuadratureRule, SolverConfig};
pub use secular::{SpectralPoint, TransverseIndex};
pub use spectrum::{Bracket, Eigenvalue, ModeIndex, Source};

/// Re-exported so downstream crates agree on the complex type.
pub use num_complex::Complex64;
