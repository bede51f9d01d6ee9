//! Mean packet delay D = T + W + V.
//!
//! T + W is the mean departure-epoch queue length (one arrival per block), and the
//! vestige V is the fraction of its last service block a packet still occupies.

use serde::Serialize;

use super::{AnalyticError, Load};
use crate::scalar::Real;
use crate::special::AdaptiveSimpson;

/// Relative tolerance of the vestige integrals.
pub const VESTIGE_QUADRATURE_TOL: f64 = 1e-13;

/// Mean queue length at departure epochs, θ(2−θ)/(2(1−θ)).
pub fn mean_queue_length<T: Real>(load: Load<T>) -> T {
    let theta = load.value();
    theta * (T::lit(2.0) - theta) / (T::lit(2.0) * load.slack())
}

/// ∫₀¹ at the vestige tolerance.
fn integrate_on_unit<T: Real, F: Fn(T) -> T>(integrand: F) -> Result<T, AnalyticError> {
    let quad = AdaptiveSimpson::new(T::lit(VESTIGE_QUADRATURE_TOL)).with_abs_tol(T::lit(1e-16));
    Ok(quad.integrate(integrand, T::zero(), T::one())?.value)
}

/// e^{−θ/x}, extended by its limit 0 at x = 0.
#[inline]
fn boundary_weight<T: Real>(theta: T, x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        (-theta / x).exp()
    }
}

/// I(θ) = ∫₀¹ (x − 1) e^{−θ/x} dx.
pub fn vestige_integral<T: Real>(load: Load<T>) -> Result<T, AnalyticError> {
    let theta = load.value();
    integrate_on_unit(|x| (x - T::one()) * boundary_weight(theta, x))
}

/// E[V] = 1/2 + I(θ).
pub fn mean_vestige<T: Real>(load: Load<T>) -> Result<T, AnalyticError> {
    Ok(T::lit(0.5) + vestige_integral(load)?)
}

/// The two conditional pieces of E[V] by whole probability over T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VestigeComponents<T> {
    /// E[V₀⁻] = 1 − e^θ ∫₀¹ e^{−θ/x} dx: packets finished inside one block.
    pub zero_service: T,
    /// Pr{T = 0} = e^{−θ}.
    pub zero_service_weight: T,
    /// Σ_{k≥1} E[V_k⁻] Pr{T = k} = 1/2 − e^{−θ} + ∫₀¹ x e^{−θ/x} dx.
    pub multi_block: T,
    pub total: T,
}

pub fn vestige_components<T: Real>(load: Load<T>) -> Result<VestigeComponents<T>, AnalyticError> {
    let theta = load.value();
    let plain = integrate_on_unit(|x| boundary_weight(theta, x))?;
    let first_moment = integrate_on_unit(|x| x * boundary_weight(theta, x))?;
    let weight = (-theta).exp();
    let zero_service = T::one() - theta.exp() * plain;
    let multi_block = T::lit(0.5) - weight + first_moment;
    Ok(VestigeComponents {
        zero_service,
        zero_service_weight: weight,
        multi_block,
        total: zero_service * weight + multi_block,
    })
}

/// E[V] assembled from its conditional components; equals [`mean_vestige`] analytically.
pub fn mean_vestige_by_components<T: Real>(load: Load<T>) -> Result<T, AnalyticError> {
    Ok(vestige_components(load)?.total)
}

/// Mean delay and its parts, all in blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayBreakdown<T> {
    pub theta: T,
    /// E[T] = θ
    pub mean_service: T,
    /// E[W] = θ²/(2(1−θ))
    pub mean_wait: T,
    /// E[V] = 1/2 + I(θ)
    pub mean_vestige: T,
    /// E[T] + E[W] + E[V]
    pub mean_delay: T,
}

pub fn mean_delay<T: Real>(load: Load<T>) -> Result<DelayBreakdown<T>, AnalyticError> {
    let theta = load.value();
    let mean_service = theta;
    let mean_wait = theta * theta / (T::lit(2.0) * load.slack());
    let mean_vestige = mean_vestige(load)?;
    Ok(DelayBreakdown {
        theta,
        mean_service,
        mean_wait,
        mean_vestige,
        mean_delay: mean_service + mean_wait + mean_vestige,
    })
}

/// E[D] = 1/2 + θ + θ²/(2(1−θ)) + ∫₀¹ (x−1) e^{−θ/x} dx, written out in one piece.
pub fn mean_delay_closed_form<T: Real>(load: Load<T>) -> Result<T, AnalyticError> {
    let theta = load.value();
    Ok(T::lit(0.5) + theta + theta * theta / (T::lit(2.0) * load.slack()) + vestige_integral(load)?)
}
