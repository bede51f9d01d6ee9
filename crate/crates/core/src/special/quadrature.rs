//! Adaptive Simpson quadrature with Richardson extrapolation.
//!
//! The integrand is evaluated at both endpoints, so a removable singularity at
//! an endpoint must be handled by the caller (return the limit value there).

use serde::Serialize;

use super::SpecialError;
use crate::scalar::{CompensatedSum, Real};

pub const DEFAULT_EVALUATION_BUDGET: usize = 1_000_000;
const INITIAL_PANELS: usize = 16;
const MAX_DEPTH: u32 = 60;

/// Value of a definite integral together with its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub evaluations: usize,
}

/// Adaptive Simpson integrator.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_evaluations: usize,
}

impl<T: Real> AdaptiveSimpson<T> {
    pub fn new(rel_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol: T::lit(1e-15),
            max_evaluations: DEFAULT_EVALUATION_BUDGET,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_budget(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn integrate<F>(&self, mut f: F, a: T, b: T) -> Result<QuadratureResult<T>, SpecialError>
    where
        F: FnMut(T) -> T,
    {
        if !(a < b) {
            return Err(SpecialError::EmptyInterval {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
            });
        }
        let half = T::lit(0.5);
        let six = T::lit(6.0);
        let simpson = |fa: T, fm: T, fb: T, h: T| h * (fa + T::lit(4.0) * fm + fb) / six;

        // Coarse pass over uniform panels gives the scale for the relative tolerance.
        let width = (b - a) / T::count(INITIAL_PANELS);
        let mut nodes = Vec::with_capacity(2 * INITIAL_PANELS + 1);
        for i in 0..=2 * INITIAL_PANELS {
            let x = if i == 2 * INITIAL_PANELS { b } else { a + width * T::count(i) * half };
            nodes.push((x, f(x)));
        }
        let mut evaluations = nodes.len();

        struct Panel<T> {
            a: T,
            b: T,
            fa: T,
            fm: T,
            fb: T,
            whole: T,
            depth: u32,
        }

        let mut stack = Vec::with_capacity(64);
        let mut coarse = CompensatedSum::new();
        for i in 0..INITIAL_PANELS {
            let (xa, fa) = nodes[2 * i];
            let (_, fm) = nodes[2 * i + 1];
            let (xb, fb) = nodes[2 * i + 2];
            let whole = simpson(fa, fm, fb, xb - xa);
            coarse.add(whole);
            stack.push(Panel { a: xa, b: xb, fa, fm, fb, whole, depth: 0 });
        }
        // Process left to right.
        stack.reverse();

        let floor = T::lit(64.0) * T::epsilon();
        let scale = coarse.value().abs();
        let tol = (self.rel_tol.max(floor) * scale).max(self.abs_tol);
        let total_width = b - a;

        let mut value = CompensatedSum::new();
        let mut error = CompensatedSum::new();
        while let Some(p) = stack.pop() {
            let m = (p.a + p.b) * half;
            let lm = (p.a + m) * half;
            let rm = (m + p.b) * half;
            if !(lm > p.a && rm < p.b && m > lm && m < rm) || p.depth >= MAX_DEPTH {
                return Err(SpecialError::QuadratureResolution(m.to_f64().unwrap_or(f64::NAN)));
            }
            let flm = f(lm);
            let frm = f(rm);
            evaluations += 2;
            let left = simpson(p.fa, flm, p.fm, m - p.a);
            let right = simpson(p.fm, frm, p.fb, p.b - m);
            let delta = left + right - p.whole;
            let local_tol = tol * (p.b - p.a) / total_width;
            if delta.abs() <= T::lit(15.0) * local_tol {
                value.add(left + right + delta / T::lit(15.0));
                error.add(delta.abs() / T::lit(15.0));
            } else {
                if evaluations >= self.max_evaluations {
                    return Err(SpecialError::QuadratureBudget {
                        budget: self.max_evaluations,
                        estimate: delta.abs().to_f64().unwrap_or(f64::NAN),
                    });
                }
                stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right, depth: p.depth + 1 });
                stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, depth: p.depth + 1 });
            }
        }

        Ok(QuadratureResult {
            value: value.value(),
            abs_error_estimate: error.value(),
            evaluations,
        })
    }
}

/// ∫ₐᵇ f(x) dx to relative tolerance `rel_tol` (absolute floor 1e−15) with the
/// default evaluation budget.
pub fn integrate_adaptive<T, F>(f: F, a: T, b: T, rel_tol: T) -> Result<QuadratureResult<T>, SpecialError>
where
    T: Real,
    F: FnMut(T) -> T,
{
    AdaptiveSimpson::new(rel_tol).integrate(f, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_is_exact() {
        let r = integrate_adaptive(|x: f64| x - 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
        assert!(r.abs_error_estimate >= 0.0);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn exponential_matches_closed_form() {
        let r = integrate_adaptive(|x: f64| (-x).exp(), 0.0, 3.0, 1e-12).unwrap();
        let want = 1.0 - (-3.0f64).exp();
        assert!((r.value - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(matches!(
            integrate_adaptive(|x: f64| x, 1.0, 0.0, 1e-10),
            Err(SpecialError::EmptyInterval { .. })
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let r = AdaptiveSimpson::new(1e-14).with_budget(100).integrate(|x: f64| (50.0 * x).sin(), 0.0, 10.0);
        assert!(matches!(r, Err(SpecialError::QuadratureBudget { .. })));
    }

    #[test]
    fn non_smooth_integrand_reports_resolution_failure_not_a_value() {
        let r = integrate_adaptive(|x: f64| if x > 0.3 { f64::NAN } else { 0.0 }, 0.0, 1.0, 1e-10);
        assert!(r.is_err());
    }
}
