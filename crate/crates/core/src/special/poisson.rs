//! Log-space Poisson terms (Loader's saddle-point form).

use crate::scalar::Real;

/// ln √(2π)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Exact ln n! for n ≤ 15, computed once as f64.
fn ln_factorial_small(n: usize) -> f64 {
    (2..=n).map(|i| i as f64).product::<f64>().ln()
}

/// Stirling error δ(n) = ln n! − (n + ½) ln n + n − ln √(2π), for n ≥ 1.
fn stirling_error<T: Real>(n: usize) -> T {
    debug_assert!(n >= 1);
    if n <= 15 {
        let nf = n as f64;
        return T::lit(ln_factorial_small(n) - (nf + 0.5) * nf.ln() + nf - LN_SQRT_2PI);
    }
    let x = T::count(n);
    let x2 = x * x;
    let s0 = T::lit(1.0 / 12.0);
    let s1 = T::lit(1.0 / 360.0);
    let s2 = T::lit(1.0 / 1260.0);
    let s3 = T::lit(1.0 / 1680.0);
    let s4 = T::lit(1.0 / 1188.0);
    (s0 - (s1 - (s2 - (s3 - s4 / x2) / x2) / x2) / x2) / x
}

/// Deviance term n ln(n/μ) + μ − n, evaluated without cancellation when n ≈ μ.
fn deviance<T: Real>(n: T, mu: T) -> T {
    let diff = n - mu;
    if diff.abs() < T::lit(0.1) * (n + mu) {
        let v = diff / (n + mu);
        let v2 = v * v;
        let mut ej = T::lit(2.0) * n * v;
        let mut s = diff * v;
        let mut j = 1usize;
        loop {
            ej = ej * v2;
            let next = s + ej / T::count(2 * j + 1);
            if next == s || j > 1000 {
                return next;
            }
            s = next;
            j += 1;
        }
    }
    n * (n / mu).ln() + mu - n
}

/// ln n!
pub fn ln_factorial<T: Real>(n: usize) -> T {
    if n <= 15 {
        return T::lit(ln_factorial_small(n));
    }
    let x = T::count(n);
    stirling_error::<T>(n) + (x + T::lit(0.5)) * x.ln() - x + T::lit(LN_SQRT_2PI)
}

/// ln Pr{Poisson(μ) = n} = n ln μ − μ − ln n!, computed to full relative precision
/// even when n and μ are in the thousands.
pub fn poisson_ln_pmf<T: Real>(n: usize, mu: T) -> T {
    if mu <= T::zero() {
        return if n == 0 { T::zero() } else { T::neg_infinity() };
    }
    if n == 0 {
        return -mu;
    }
    let nf = T::count(n);
    -stirling_error::<T>(n) - deviance(nf, mu) - T::lit(0.5) * (T::lit(2.0) * T::PI() * nf).ln()
}

/// Pr{Poisson(μ) = n}.
pub fn poisson_pmf<T: Real>(n: usize, mu: T) -> T {
    poisson_ln_pmf(n, mu).exp()
}
