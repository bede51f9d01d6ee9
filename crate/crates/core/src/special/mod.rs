//! Special functions and numerical kernels behind the closed-form results.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`regularized_gamma_upper`] | Q(k, x) for integer k |
//! | [`regularized_gamma_lower`] | P(k, x) = 1 − Q(k, x) for integer k |
//! | [`poisson_ln_pmf`] | ln Pr{Poisson(μ) = n}, accurate for large n and μ |
//! | [`ln_factorial`] | ln n! |
//! | [`lambert_w_minus1_conjugate`] | z* = −W₋₁(−θe^{−θ})/θ |
//! | [`integrate_adaptive`] | adaptive Simpson quadrature |
//!
//! Everything here is a pure function, generic over [`Real`](crate::Real).

mod incgamma;
mod lambert;
mod poisson;
mod quadrature;

use thiserror::Error;

pub use incgamma::{regularized_gamma_lower, regularized_gamma_upper};
pub use lambert::{conjugate_load_root, lambert_w_minus1_conjugate};
pub use poisson::{ln_factorial, poisson_ln_pmf, poisson_pmf};
pub use quadrature::{integrate_adaptive, AdaptiveSimpson, QuadratureResult, DEFAULT_EVALUATION_BUDGET};

/// Errors from special function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("incomplete gamma order must be a positive integer, got k = 0")]
    ZeroOrder,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error(
        "load θ = {0} is at the Lambert W branch point: both real branches merge at θ = 1, \
         so z* = 1 and the stationary queue has no geometric tail"
    )]
    BranchPoint(f64),
    #[error("series did not converge within {0} terms")]
    SeriesBudget(usize),
    #[error("quadrature exhausted its budget of {budget} evaluations (error estimate {estimate:e})")]
    QuadratureBudget { budget: usize, estimate: f64 },
    #[error("quadrature interval collapsed below machine resolution near x = {0}")]
    QuadratureResolution(f64),
    #[error("quadrature interval is empty or reversed: [{a}, {b}]")]
    EmptyInterval { a: f64, b: f64 },
}
