//! Regularized incomplete gamma functions for integer order.
//!
//! For integer k the upper function is a finite Poisson sum,
//! Q(k, x) = Σ_{j<k} e^{−x} x^j / j!, and the lower one is the matching
//! right tail P(k, x) = Σ_{j≥k} e^{−x} x^j / j!.

use super::poisson::poisson_ln_pmf;
use super::SpecialError;
use crate::scalar::{CompensatedSum, Real};

const MAX_TAIL_TERMS: usize = 1_000_000;

fn check<T: Real>(k: u32, x: T) -> Result<(), SpecialError> {
    if k == 0 {
        return Err(SpecialError::ZeroOrder);
    }
    if !(x >= T::zero()) {
        return Err(SpecialError::Domain(format!("incomplete gamma needs x ≥ 0, got {x}")));
    }
    Ok(())
}

fn upper_sum<T: Real>(k: u32, x: T) -> T {
    let mut acc = CompensatedSum::new();
    for j in 0..k as usize {
        acc.add(poisson_ln_pmf(j, x).exp());
    }
    acc.value().min(T::one())
}

fn lower_tail<T: Real>(k: u32, x: T) -> Result<T, SpecialError> {
    let mut acc = CompensatedSum::new();
    let mut j = k as usize;
    loop {
        let term = poisson_ln_pmf(j, x).exp();
        acc.add(term);
        // Past j ≥ x the term ratio x/(j+1) is below one and bounds the remainder.
        let ratio = x / T::count(j + 1);
        if ratio < T::one() {
            let remainder = term * ratio / (T::one() - ratio);
            if remainder <= T::epsilon() * acc.value() || term == T::zero() {
                return Ok(acc.value().min(T::one()));
            }
        }
        j += 1;
        if j - k as usize > MAX_TAIL_TERMS {
            return Err(SpecialError::SeriesBudget(MAX_TAIL_TERMS));
        }
    }
}

/// Regularized upper incomplete gamma Q(k, x) = Γ(k, x)/Γ(k) for integer k ≥ 1.
pub fn regularized_gamma_upper<T: Real>(k: u32, x: T) -> Result<T, SpecialError> {
    check(k, x)?;
    if x == T::zero() {
        return Ok(T::one());
    }
    if x < T::count(k as usize) {
        Ok(T::one() - lower_tail(k, x)?)
    } else {
        Ok(upper_sum(k, x))
    }
}

/// Regularized lower incomplete gamma P(k, x) = γ(k, x)/Γ(k) for integer k ≥ 1.
pub fn regularized_gamma_lower<T: Real>(k: u32, x: T) -> Result<T, SpecialError> {
    check(k, x)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x < T::count(k as usize) {
        lower_tail(k, x)
    } else {
        Ok(T::one() - upper_sum(k, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_order() {
        assert_eq!(regularized_gamma_upper(0, 1.0f64), Err(SpecialError::ZeroOrder));
        assert_eq!(regularized_gamma_lower(0, 1.0f64), Err(SpecialError::ZeroOrder));
    }

    #[test]
    fn rejects_negative_argument() {
        assert!(regularized_gamma_upper(2, -0.1f64).is_err());
        assert!(regularized_gamma_lower(2, f64::NAN).is_err());
    }

    #[test]
    fn endpoint_values() {
        assert_eq!(regularized_gamma_upper(1, 0.0f64).unwrap(), 1.0);
        assert_eq!(regularized_gamma_lower(1, 0.0f64).unwrap(), 0.0);
        assert_eq!(regularized_gamma_lower(4, 1e4f64).unwrap(), 1.0);
    }

    #[test]
    fn order_one_is_exponential() {
        let q: f64 = regularized_gamma_upper(1, 0.5).unwrap();
        assert!((q - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn small_lower_values_keep_relative_precision() {
        // P(10, 0.01) ≈ 0.01^10 e^{-0.01} / 10!
        let p: f64 = regularized_gamma_lower(10, 0.01).unwrap();
        let lead = 1e-20 * (-0.01f64).exp() / 3_628_800.0;
        assert!((p / lead - 1.0).abs() < 1e-3);
    }

    #[test]
    fn works_in_single_precision() {
        let q: f32 = regularized_gamma_upper(3, 2.0).unwrap();
        assert!((q - 0.676_676_4).abs() < 1e-6);
    }
}
