use fadeq::analytic::{mean_delay, phi, SeriesOptions};
use serde_json::json;

use super::stable_load;
use crate::args::SweepArgs;
use crate::error::CliError;
use crate::output::{csv_bytes, OutputSet};

pub const DELAY_FILE: &str = "delay_vs_theta.csv";
pub const DELAY_HEADER: [&str; 5] = ["theta", "E_T", "E_W", "E_V", "E_D"];
pub const PI_HEADER: [&str; 3] = ["k", "pi_k", "ln_pi_k"];

pub fn pi_file_name(theta: f64) -> String {
    format!("pi_vs_k_theta_{theta}.csv")
}

fn grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    let step = (max - min) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { max } else { min + i as f64 * step }).collect()
}

/// π_0..=π_max_k from the tail sums directly, so the list is not cut at the truncation point.
pub fn pi_curve(theta: f64, max_k: usize) -> Result<Vec<f64>, CliError> {
    let load = stable_load(theta)?;
    let opts = SeriesOptions::default();
    let mut prev = 1.0;
    let mut out = Vec::with_capacity(max_k + 1);
    for k in 0..=max_k {
        let tail = phi(load, k, &opts)?.value;
        out.push(prev - tail);
        prev = tail;
    }
    Ok(out)
}

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    let (lo, hi) = (args.theta_min, args.theta_max);
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(CliError::Invalid(format!("need 0 < theta-min < theta-max < 1, got [{lo}, {hi}]")));
    }
    if args.points < 2 {
        return Err(CliError::Invalid(format!("need at least 2 points, got {}", args.points)));
    }
    for &t in &args.pi_thetas {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Invalid(format!("pi-thetas must lie in (0, 1), got {t}")));
        }
    }

    let mut rows = Vec::with_capacity(args.points);
    for theta in grid(lo, hi, args.points) {
        let d = mean_delay(stable_load(theta)?)?;
        rows.push((theta, d.mean_service, d.mean_wait, d.mean_vestige, d.mean_delay));
    }
    let mut out = OutputSet::create(&args.out_dir)?;
    out.write(DELAY_FILE, &csv_bytes(&DELAY_HEADER, rows)?)?;
    let mut files = vec![DELAY_FILE.to_string()];
    for &theta in &args.pi_thetas {
        let pi = pi_curve(theta, args.max_k)?;
        let rows = pi.iter().enumerate().map(|(k, &p)| (k, p, p.ln()));
        let name = pi_file_name(theta);
        out.write(&name, &csv_bytes(&PI_HEADER, rows)?)?;
        files.push(name);
    }
    out.finish(
        "sweep",
        json!({
            "theta_min": lo,
            "theta_max": hi,
            "points": args.points,
            "pi_thetas": args.pi_thetas,
            "max_k": args.max_k,
        }),
        vec![],
    )?;
    for f in files {
        println!("{}", args.out_dir.join(f).display());
    }
    Ok(())
}
