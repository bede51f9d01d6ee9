use fadeq::special::{
    conjugate_load_root, integrate_adaptive, lambert_w_minus1_conjugate, ln_factorial, poisson_pmf,
    regularized_gamma_lower, regularized_gamma_upper, AdaptiveSimpson, SpecialError,
};
use proptest::prelude::*;

/// Composite Simpson with a fixed panel count.
fn simpson_fixed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Richardson-extrapolated Simpson, used as an independent reference.
fn simpson_reference<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64) -> f64 {
    let coarse = simpson_fixed(f, a, b, 10_000);
    let fine = simpson_fixed(f, a, b, 20_000);
    fine + (fine - coarse) / 15.0
}

fn gamma_pdf(k: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return if k == 1 { 1.0 } else { 0.0 };
    }
    ((k as f64 - 1.0) * t.ln() - t - (1..k).map(|i| (i as f64).ln()).sum::<f64>()).exp()
}

#[test]
fn lower_gamma_matches_integrated_density() {
    for &k in &[1u32, 2, 3, 5, 8] {
        for &x in &[0.1, 0.5, 1.0, 2.5, 7.0] {
            let reference = simpson_reference(|t| gamma_pdf(k, t), 0.0, x);
            let p = regularized_gamma_lower(k, x).unwrap();
            assert!((p - reference).abs() < 1e-11, "k={k} x={x}: {p} vs {reference}");
        }
    }
}

#[test]
fn upper_gamma_is_a_poisson_sum() {
    for &k in &[1u32, 2, 4, 10, 30] {
        for &x in &[0.05f64, 0.5, 3.0, 12.0, 40.0] {
            let mut term = (-x).exp();
            let mut sum = term;
            for j in 1..k {
                term *= x / j as f64;
                sum += term;
            }
            let q = regularized_gamma_upper(k, x).unwrap();
            assert!((q - sum).abs() <= 1e-13 * sum.max(1e-300) + 1e-300, "k={k} x={x}: {q} vs {sum}");
        }
    }
}

#[test]
fn gamma_rejects_order_zero() {
    assert_eq!(regularized_gamma_lower(0, 1.0f64), Err(SpecialError::ZeroOrder));
    assert_eq!(regularized_gamma_upper(0, 1.0f64), Err(SpecialError::ZeroOrder));
}

#[test]
fn poisson_pmf_against_direct_product() {
    for &mu in &[0.2f64, 0.5, 0.8, 3.0, 25.0] {
        let mut direct = (-mu).exp();
        for n in 0..60usize {
            if n > 0 {
                direct *= mu / n as f64;
            }
            let p = poisson_pmf(n, mu);
            assert!((p - direct).abs() <= 1e-13 * direct + 1e-300, "mu={mu} n={n}");
        }
    }
    let ln100: f64 = (1..=100).map(|i| (i as f64).ln()).sum();
    assert!((ln_factorial::<f64>(100) - ln100).abs() < 1e-10);
}

#[test]
fn conjugate_root_reference_values() {
    let cases = [
        (0.1f64, 37.1495),
        (0.2, 14.3020),
        (0.5, 3.512862417252339),
        (0.8, 1.538553),
        (0.9, 1.230163),
    ];
    for (theta, z) in cases {
        let got = lambert_w_minus1_conjugate(theta).unwrap();
        let digits = if theta == 0.5 { 1e-13 } else { 5e-6 };
        assert!((got - z).abs() / z < digits, "θ={theta}: {got} vs {z}");
    }
}

#[test]
fn conjugate_root_domain() {
    assert!(matches!(lambert_w_minus1_conjugate(1.0f64), Err(SpecialError::BranchPoint(_))));
    assert!(lambert_w_minus1_conjugate(0.0f64).is_err());
    assert!(lambert_w_minus1_conjugate(1.2f64).is_err());
}

#[test]
fn conjugate_root_fixed_point_on_grid() {
    for i in 1..100 {
        let theta = i as f64 / 100.0;
        let x = conjugate_load_root(theta).unwrap();
        assert!(x > 1.0);
        let lhs = x.ln() - x;
        let rhs = theta.ln() - theta;
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "θ={theta}");
    }
}

#[test]
fn adaptive_simpson_against_reference_integrals() {
    let j0 = integrate_adaptive(|x: f64| if x > 0.0 { (-0.5 / x).exp() } else { 0.0 }, 0.0, 1.0, 1e-13).unwrap();
    assert!((j0.value - 0.326_643_862_324_553).abs() < 1e-12);
    let sin = integrate_adaptive(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
    assert!((sin.value - 2.0).abs() < 1e-11);
    let sqrt = integrate_adaptive(f64::sqrt, 0.0, 1.0, 1e-10).unwrap();
    assert!((sqrt.value - 2.0 / 3.0).abs() < 1e-9);
    assert!(sqrt.evaluations > 0);
}

#[test]
fn adaptive_simpson_budget_and_interval_errors() {
    let tight = AdaptiveSimpson::new(1e-15f64).with_budget(50);
    assert!(matches!(
        tight.integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0),
        Err(SpecialError::QuadratureBudget { .. })
    ));
    assert!(matches!(
        integrate_adaptive(|x: f64| x, 1.0, 1.0, 1e-8),
        Err(SpecialError::EmptyInterval { .. })
    ));
}

proptest! {
    #[test]
    fn lower_plus_upper_is_one(k in 1u32..60, x in 0.0f64..80.0) {
        let p = regularized_gamma_lower(k, x).unwrap();
        let q = regularized_gamma_upper(k, x).unwrap();
        prop_assert!((p + q - 1.0).abs() < 1e-13);
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn lower_gamma_is_monotone_in_x(k in 1u32..20, x in 0.0f64..30.0, dx in 0.0f64..5.0) {
        let a = regularized_gamma_lower(k, x).unwrap();
        let b = regularized_gamma_lower(k, x + dx).unwrap();
        prop_assert!(b >= a - 1e-15);
    }
}
