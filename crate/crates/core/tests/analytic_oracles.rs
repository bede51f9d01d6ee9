use fadeq::analytic::{
    decay_rate, mean_delay, mean_delay_closed_form, mean_queue_length, mean_vestige, mean_vestige_by_components,
    phi, service_pgf, service_pmf, stationary_distribution, stationary_distribution_with, stationary_pgf,
    vestige_components, vestige_integral, AnalyticError, Load, SeriesFault, SeriesOptions, ServiceDistribution,
};
use fadeq::special::lambert_w_minus1_conjugate;
use num_complex::Complex64;
use proptest::prelude::*;

fn load(theta: f64) -> Load<f64> {
    Load::new(theta).unwrap()
}

/// π_k computed at 50 significant digits with an arbitrary-precision library.
const PI_HIGH_PRECISION: [(f64, [f64; 6]); 3] = [
    (0.2, [0.8, 0.177122206528, 0.0209131102793, 0.00181826439037, 1.36088449103e-4, 9.61020198635e-6]),
    (0.5, [0.5, 0.32436063535, 0.122599961204, 0.0377881038038, 0.0109088235651, 0.00310674634581]),
    (0.8, [0.2, 0.245108185698, 0.189411750622, 0.127579583425, 0.083275592434, 0.0541276495742]),
];

/// Stationary PGF evaluated in complex arithmetic.
fn pgf_complex(theta: f64, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (1.0 - theta) * (one - z) / (one - z * ((one - z) * theta).exp())
}

/// Taylor coefficient k by the trapezoidal rule on |z| = r.
fn taylor_coefficient(theta: f64, k: usize, r: f64) -> f64 {
    let m = 512;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let z = Complex64::from_polar(r, angle);
        acc += pgf_complex(theta, z) / z.powu(k as u32);
    }
    (acc / m as f64).re
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn vestige_reference(theta: f64) -> f64 {
    let g = |x: f64| if x > 0.0 { (x - 1.0) * (-theta / x).exp() } else { 0.0 };
    let coarse = simpson(g, 0.0, 1.0, 20_000);
    let fine = simpson(g, 0.0, 1.0, 40_000);
    0.5 + fine + (fine - coarse) / 15.0
}

#[test]
fn series_matches_high_precision_values() {
    for (theta, expected) in PI_HIGH_PRECISION {
        let pi = stationary_distribution(load(theta), 1e-14).unwrap();
        for (k, &e) in expected.iter().enumerate() {
            assert!((pi.probabilities[k] - e).abs() < 1e-11, "θ={theta} k={k}");
        }
    }
}

#[test]
fn series_matches_contour_coefficients() {
    for &theta in &[0.2, 0.5, 0.8] {
        let pi = stationary_distribution(load(theta), 1e-14).unwrap();
        for k in 0..=5 {
            let c = taylor_coefficient(theta, k, 0.5);
            assert!((pi.probabilities[k] - c).abs() < 1e-6, "θ={theta} k={k}: {} vs {c}", pi.probabilities[k]);
        }
    }
}

#[test]
fn series_pgf_matches_closed_form() {
    for &theta in &[0.2, 0.5, 0.8] {
        let l = load(theta);
        let pi = stationary_distribution(l, 1e-14).unwrap();
        for &z in &[0.0, 0.5, 0.9, 1.0] {
            let closed = stationary_pgf(l, z).unwrap();
            assert!((pi.pgf_series(z) - closed).abs() < 1e-9, "θ={theta} z={z}");
        }
    }
    assert!((stationary_pgf(load(0.5), 0.5).unwrap() - 0.698_348_812_449_302_6).abs() < 1e-13);
    assert_eq!(stationary_pgf(load(0.5), 0.0).unwrap(), 0.5);
}

#[test]
fn pgf_limits_and_radius() {
    let l = load(0.5);
    for &u in &[1e-12, 1e-10, 1e-9, 1e-7] {
        assert!((stationary_pgf(l, 1.0 - u).unwrap() - 1.0).abs() < 1e-6);
        assert!((stationary_pgf(l, 1.0 + u).unwrap() - 1.0).abs() < 1e-6);
    }
    let z_star: f64 = lambert_w_minus1_conjugate(0.5).unwrap();
    assert!(matches!(stationary_pgf(l, z_star * (1.0 + 1e-6)), Err(AnalyticError::OutsideRadius { .. })));
    assert!(stationary_pgf(l, z_star * (1.0 - 1e-9)).is_ok());
}

#[test]
fn zero_state_and_normalization() {
    for i in 1..10 {
        let theta = i as f64 / 10.0;
        let pi = stationary_distribution(load(theta), 1e-12).unwrap();
        assert!((pi.probabilities[0] - (1.0 - theta)).abs() < 1e-10);
        assert!((pi.total_mass() - 1.0).abs() < 1e-8);
        assert!((pi.mean() - mean_queue_length(load(theta))).abs() < 1e-6, "θ={theta}");
        assert!(pi.tail_mass_bound <= 1e-12);
        assert!(pi.probabilities.iter().all(|&p| p >= 0.0));
    }
}

#[test]
fn mean_at_half_load() {
    let pi = stationary_distribution(load(0.5), 1e-14).unwrap();
    assert!((pi.mean() - 0.75).abs() < 1e-8);
}

#[test]
fn tail_decay_follows_the_singularity() {
    let l = load(0.5);
    let pi = stationary_distribution(l, 1e-20).unwrap();
    let z_star: f64 = lambert_w_minus1_conjugate(0.5).unwrap();
    let ks: Vec<f64> = (10..=30).map(|k| k as f64).collect();
    let ys: Vec<f64> = (10..=30).map(|k| pi.probabilities[k].ln()).collect();
    let n = ks.len() as f64;
    let (mx, my) = (ks.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = ks.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / ks.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    assert!((slope + z_star.ln()).abs() / z_star.ln() < 0.05, "slope {slope}");
    let ratio = pi.probabilities[31] / pi.probabilities[30];
    assert!((ratio * z_star - 1.0).abs() < 0.02);
    assert!((decay_rate(l).unwrap() - 1.0 / z_star).abs() < 1e-14);
}

#[test]
fn phi_terms_and_remainders() {
    let opts = SeriesOptions::default();
    let l = load(0.5);
    assert!((phi(l, 0, &opts).unwrap().value - 0.5).abs() < 1e-14);
    let mut prev = 1.0;
    for k in 0..40 {
        let t = phi(l, k, &opts).unwrap();
        assert!(t.value < prev);
        assert!(t.remainder_bound <= 1e-15 * t.value.max(1e-300) + 1e-300);
        prev = t.value;
    }
}

#[test]
fn flipped_sign_fault_corrupts_the_distribution() {
    let opts = SeriesOptions { fault: Some(SeriesFault::FlipPhiSign), ..SeriesOptions::default() };
    if let Ok(pi) = stationary_distribution_with(load(0.5), 1e-10, &opts) {
        assert!((pi.probabilities[1] - 0.32436063535).abs() > 1e-3);
    }
}

#[test]
fn stationary_distribution_arguments() {
    assert!(matches!(stationary_distribution(load(0.5), 0.0), Err(AnalyticError::TailTolerance(_))));
    assert!(matches!(stationary_distribution(load(0.5), 0.1), Err(AnalyticError::TailTolerance(_))));
    assert!(Load::new(1.2f64).is_err());
    assert!(Load::new(1.0f64).is_err());
    assert!(Load::new(0.0f64).is_err());
}

#[test]
fn single_precision_distribution() {
    let pi = stationary_distribution(Load::new(0.5f32).unwrap(), 1e-6).unwrap();
    assert!((pi.probabilities[0] - 0.5).abs() < 1e-6);
    assert!((pi.probabilities[1] - 0.324_360_6).abs() < 1e-5);
    let d = mean_delay(Load::new(0.5f32).unwrap()).unwrap();
    assert!((d.mean_delay - 1.144_960_5).abs() < 1e-4);
}

#[test]
fn service_distribution_is_poisson() {
    let s = ServiceDistribution::new(load(0.5));
    let total: f64 = (0..40).map(|k| s.pmf(k)).sum();
    assert!((total - 1.0).abs() < 1e-14);
    assert!((s.mean() - 0.5).abs() < 1e-15);
    assert!((s.pgf_derivative_at_one() - 0.5).abs() < 1e-15);
    let h = 1e-5;
    let fd = (s.pgf(1.0 + h) - s.pgf(1.0 - h)) / (2.0 * h);
    assert!((fd - 0.5).abs() < 1e-6);
    assert_eq!(s.pgf(1.0), 1.0);
    assert!((s.pgf(0.0) - s.pmf(0)).abs() < 1e-16);
    assert!((service_pmf(load(0.5), 1) - 0.5 * (-0.5f64).exp()).abs() < 1e-16);
    assert!((service_pgf(load(0.5), 0.3) - (0.5f64 * (0.3 - 1.0)).exp()).abs() < 1e-16);
}

#[test]
fn delay_at_half_load_matches_high_precision() {
    let l = load(0.5);
    assert!((vestige_integral(l).unwrap() + 0.105_039_498_049_374_56).abs() < 1e-12);
    assert!((mean_vestige(l).unwrap() - 0.394_960_501_950_625_44).abs() < 1e-12);
    let d = mean_delay(l).unwrap();
    assert!((d.mean_delay - 1.144_960_501_950_625_4).abs() < 1e-12);
    assert_eq!(d.mean_service, 0.5);
    assert_eq!(d.mean_wait, 0.25);
    let c = vestige_components(l).unwrap();
    assert!((c.zero_service - 0.461_455_316_241_865_23).abs() < 1e-12);
    assert!((c.zero_service_weight - (-0.5f64).exp()).abs() < 1e-16);
}

#[test]
fn delay_identities_on_grid() {
    for i in 1..100 {
        let theta = i as f64 / 100.0;
        let l = load(theta);
        let d = mean_delay(l).unwrap();
        let closed = mean_delay_closed_form(l).unwrap();
        assert!((closed - (d.mean_service + d.mean_wait + d.mean_vestige)).abs() < 1e-12);
        let v = mean_vestige(l).unwrap();
        assert!((v - mean_vestige_by_components(l).unwrap()).abs() < 1e-10, "θ={theta}");
        assert!(v > 0.0 && v < 0.5);
        assert!((v - vestige_reference(theta)).abs() < 1e-10, "θ={theta}");
        assert!((d.mean_service + d.mean_wait - mean_queue_length(l)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pmf_is_a_difference_of_tails(theta in 0.05f64..0.95) {
        let l = load(theta);
        let opts = SeriesOptions::default();
        let pi = stationary_distribution(l, 1e-12).unwrap();
        for k in 1..6 {
            let diff = phi(l, k - 1, &opts).unwrap().value - phi(l, k, &opts).unwrap().value;
            prop_assert!((pi.probabilities[k] - diff).abs() < 1e-14);
        }
    }

    #[test]
    fn pgf_is_increasing_on_the_unit_interval(theta in 0.05f64..0.95, z in 0.0f64..0.99) {
        let l = load(theta);
        prop_assert!(stationary_pgf(l, z + 0.01).unwrap() >= stationary_pgf(l, z).unwrap());
    }
}
