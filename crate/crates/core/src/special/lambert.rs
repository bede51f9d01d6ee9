//! Lower-branch Lambert W, restricted to the one real evaluation the queue needs.
//!
//! For 0 < θ < 1 the equation x e^{−x} = θ e^{−θ} has two positive roots: θ itself
//! and a conjugate x* > 1. The stationary PGF singularity is z* = x*/θ, which is the
//! same number as −W₋₁(−θe^{−θ})/θ.

use super::SpecialError;
use crate::scalar::Real;

/// g(x) = (ln x − x) − (ln θ − θ), written around x = 1 and θ = 1 with `ln_1p` so the
/// residual keeps its precision when θ is close to one.
fn residual<T: Real>(x: T, theta: T) -> T {
    let u = x - T::one();
    let s = T::one() - theta;
    (u.ln_1p() - u) - ((-s).ln_1p() + s)
}

/// Conjugate root x* > 1 of x e^{−x} = θ e^{−θ}.
pub fn conjugate_load_root<T: Real>(theta: T) -> Result<T, SpecialError> {
    if !(theta > T::zero()) {
        return Err(SpecialError::Domain(format!("load must be positive, got θ = {theta}")));
    }
    if theta == T::one() {
        return Err(SpecialError::BranchPoint(1.0));
    }
    if theta > T::one() {
        return Err(SpecialError::Domain(format!(
            "load must be below one for a conjugate root, got θ = {theta}"
        )));
    }

    // g is decreasing on (1, ∞), positive at 1 and → −∞.
    let mut lo = T::one();
    let mut hi = T::lit(2.0);
    while residual(hi, theta) > T::zero() {
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > T::lit(1e300).min(T::max_value()) {
            return Err(SpecialError::Domain(format!("no conjugate root bracket for θ = {theta}")));
        }
    }

    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid, theta) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::lit(1e-6) * hi {
            break;
        }
    }

    // Newton on g(x) with g'(x) = 1/x − 1, kept inside the bracket.
    let mut x = (lo + hi) / T::lit(2.0);
    for _ in 0..50 {
        let g = residual(x, theta);
        let slope = x.recip() - T::one();
        let next = x - g / slope;
        let next = if next > lo && next < hi { next } else { (lo + hi) / T::lit(2.0) };
        if g > T::zero() {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        if (next - x).abs() <= T::epsilon() * x {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Dominant singularity z* > 1 of the stationary queue-length PGF for load θ ∈ (0, 1).
///
/// z* solves z e^{θ(1−z)} = 1 and equals (−1/θ)·W₋₁(−θe^{−θ}).
pub fn lambert_w_minus1_conjugate<T: Real>(theta: T) -> Result<T, SpecialError> {
    Ok(conjugate_load_root(theta)? / theta)
}
