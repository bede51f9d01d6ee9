use fadeq::analytic::{
    mean_delay, mean_delay_closed_form, mean_queue_length, mean_vestige, mean_vestige_by_components, phi,
    service_pmf, stationary_distribution_with, stationary_pgf, Load, SeriesFault, SeriesOptions,
    StationaryDistribution,
};
use fadeq::markov::{build_chain, stationary_solve};
use fadeq::sim::{
    chi_square_gof, compare_epochs, simulate, total_variation, tv_to_distribution, Engine, SimConfig, SimStats,
};
use fadeq::special::lambert_w_minus1_conjugate;
use serde::Serialize;
use serde_json::json;

use super::stable_load;
use crate::args::{FaultArg, VerifyArgs};
use crate::error::CliError;
use crate::output::{json_bytes, OutputSet, MANIFEST_NAME};

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
enum Relation {
    AtMost,
    Below,
    Above,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    name: &'static str,
    theta: f64,
    measured: f64,
    relation: Relation,
    bound: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

struct Table {
    checks: Vec<Check>,
}

impl Table {
    fn record(&mut self, name: &'static str, theta: f64, relation: Relation, bound: f64, value: Result<f64, String>) {
        let (measured, error) = match value {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e)),
        };
        let pass = match relation {
            Relation::AtMost => measured <= bound,
            Relation::Below => measured < bound,
            Relation::Above => measured > bound,
        };
        self.checks.push(Check { name, theta, measured, relation, bound, pass, error });
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn slope_of_log_tail(load: Load<f64>, opts: &SeriesOptions) -> Result<f64, String> {
    let mut prev = phi(load, 9, opts).map_err(err)?.value;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 10..=30 {
        let tail = phi(load, k, opts).map_err(err)?.value;
        xs.push(k as f64);
        ys.push((prev - tail).ln());
        prev = tail;
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    Ok(xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>())
}

fn analytic_checks(t: &mut Table, theta: f64, dimension: usize, opts: &SeriesOptions) -> Result<(), CliError> {
    let load = stable_load(theta)?;
    let series: Result<StationaryDistribution<f64>, String> = stationary_distribution_with(load, 1e-12, opts).map_err(err);
    let matrix = build_chain(load, dimension).map_err(err).and_then(|c| stationary_solve(&c, 1e-12).map_err(err));

    let s = series.as_ref().map_err(Clone::clone);
    t.record("series pi0 = 1 - theta", theta, Relation::AtMost, 1e-10, s.clone().map(|p| (p.probabilities[0] - (1.0 - theta)).abs()));
    t.record(
        "matrix pi0 = 1 - theta",
        theta,
        Relation::AtMost,
        1e-9,
        matrix.as_ref().map_err(Clone::clone).map(|m| (m.probabilities[0] - (1.0 - theta)).abs()),
    );
    let sup = match (&series, &matrix) {
        (Ok(p), Ok(m)) => Ok(m
            .probabilities
            .iter()
            .enumerate()
            .map(|(k, &q)| (p.pi(k).unwrap_or(0.0) - q).abs())
            .fold(0.0, f64::max)),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    t.record("series vs matrix sup-norm", theta, Relation::AtMost, 1e-8, sup);
    t.record("total mass", theta, Relation::AtMost, 1e-8, s.clone().map(|p| (p.total_mass() - 1.0).abs()));
    t.record(
        "mean queue vs closed form",
        theta,
        Relation::AtMost,
        1e-6,
        s.clone().map(|p| (p.mean() - mean_queue_length(load)).abs()),
    );
    t.record(
        "series pgf vs closed form at z=0.5",
        theta,
        Relation::AtMost,
        1e-9,
        s.clone().and_then(|p| Ok((p.pgf_series(0.5) - stationary_pgf(load, 0.5).map_err(err)?).abs())),
    );
    let z_star = lambert_w_minus1_conjugate(theta).map_err(|e| CliError::Invalid(e.to_string()))?;
    t.record(
        "tail slope vs -ln z* (relative)",
        theta,
        Relation::AtMost,
        0.05,
        slope_of_log_tail(load, opts).map(|s| (s + z_star.ln()).abs() / z_star.ln()),
    );
    let identity = mean_delay(load)
        .map_err(err)
        .and_then(|d| Ok((mean_delay_closed_form(load).map_err(err)? - (d.mean_service + d.mean_wait + d.mean_vestige)).abs()));
    t.record("delay identity D = T + W + V", theta, Relation::AtMost, 1e-12, identity);
    let components = mean_vestige(load)
        .map_err(err)
        .and_then(|v| Ok((v - mean_vestige_by_components(load).map_err(err)?).abs()));
    t.record("vestige by components", theta, Relation::AtMost, 1e-10, components);
    t.record("mean vestige", theta, Relation::Below, 0.5, mean_vestige(load).map_err(err));
    Ok(())
}

fn simulation_checks(t: &mut Table, theta: f64, blocks: u64, seed: u64, opts: &SeriesOptions) -> Result<(), CliError> {
    let load = stable_load(theta)?;
    let epoch_bound = if theta >= 0.8 { 0.015 } else { 0.01 };
    let run = |engine, seed| -> Result<SimStats, String> { simulate(&SimConfig::for_load(engine, theta, blocks, seed)).map_err(err) };
    let cont = run(Engine::Continuous, seed);
    let disc = run(Engine::Discrete, seed.wrapping_add(1));
    let series = stationary_distribution_with(load, 1e-12, opts).map_err(err);

    let c = cont.as_ref().map_err(Clone::clone);
    let d = disc.as_ref().map_err(Clone::clone);
    let exact = mean_delay(load)?;
    t.record(
        "continuous sim mean delay (z)",
        theta,
        Relation::AtMost,
        3.0,
        c.clone().map(|s| s.summary().mean_delay.z_score(exact.mean_delay)),
    );
    t.record(
        "continuous sim mean vestige (z)",
        theta,
        Relation::AtMost,
        3.0,
        c.clone().and_then(|s| s.summary().mean_vestige.map(|v| v.z_score(exact.mean_vestige)).ok_or_else(|| "no vestiges".into())),
    );
    t.record(
        "service blocks vs Poisson (chi-square p)",
        theta,
        Relation::Above,
        0.01,
        c.clone().and_then(|s| chi_square_gof(&s.service_time_histogram, |k| service_pmf(load, k)).map(|r| r.p_value).map_err(err)),
    );
    t.record(
        "departure vs boundary epochs (TV)",
        theta,
        Relation::Below,
        epoch_bound,
        c.clone().and_then(|s| compare_epochs(s).map(|r| r.total_variation).map_err(err)),
    );
    let vs_series = |h: Result<&SimStats, String>| match (&series, &h) {
        (Ok(p), Ok(s)) => tv_to_distribution(&s.queue_length_histogram_departure, &p.probabilities).map_err(err),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    t.record("continuous sim vs series pi (TV)", theta, Relation::Below, epoch_bound, vs_series(c.clone()));
    t.record("discrete sim vs series pi (TV)", theta, Relation::Below, epoch_bound, vs_series(d.clone()));
    let engines = match (c, d) {
        (Ok(a), Ok(b)) => total_variation(&a.queue_length_histogram_departure, &b.queue_length_histogram_departure).map_err(err),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    t.record("continuous vs discrete engine (TV)", theta, Relation::Below, epoch_bound, engines);
    Ok(())
}

fn print_table(checks: &[Check]) {
    println!("{:<42} {:>6} {:>14} {:>11}  RESULT", "CHECK", "THETA", "MEASURED", "BOUND");
    for c in checks {
        let rel = match c.relation {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::Above => ">",
        };
        println!(
            "{:<42} {:>6} {:>14.6e} {:>3}{:>8.1e}  {}{}",
            c.name,
            c.theta,
            c.measured,
            rel,
            c.bound,
            if c.pass { "PASS" } else { "FAIL" },
            c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
    }
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    if args.thetas.is_empty() {
        return Err(CliError::Invalid("--thetas is empty".into()));
    }
    for &theta in &args.thetas {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(CliError::Invalid(format!("every θ must lie in (0, 1), got {theta}")));
        }
    }
    let opts = SeriesOptions {
        fault: args.inject_fault.map(|f| match f {
            FaultArg::FlipPhiSign => SeriesFault::FlipPhiSign,
        }),
        ..SeriesOptions::default()
    };
    let mut table = Table { checks: Vec::new() };
    for (i, &theta) in args.thetas.iter().enumerate() {
        analytic_checks(&mut table, theta, args.dimension, &opts)?;
        let seed = args.seed.wrapping_add(2 * i as u64);
        simulation_checks(&mut table, theta, args.blocks, seed, &opts)?;
    }
    print_table(&table.checks);
    let failed = table.checks.iter().filter(|c| !c.pass).count();
    println!("{} of {} checks passed", table.checks.len() - failed, table.checks.len());

    if let Some(dir) = &args.out_dir {
        let mut out = OutputSet::create(dir)?;
        let doc = json!({ "manifest": MANIFEST_NAME, "checks": table.checks, "failed": failed });
        out.write("verify.json", &json_bytes(&doc)?)?;
        let seeds = (0..2 * args.thetas.len() as u64).map(|s| args.seed.wrapping_add(s)).collect();
        out.finish(
            "verify",
            json!({
                "thetas": args.thetas,
                "post_warmup_blocks": args.blocks,
                "dimension": args.dimension,
                "inject_fault": args.inject_fault.map(|_| "flip-phi-sign"),
            }),
            seeds,
        )?;
    }
    if failed > 0 {
        Err(CliError::VerificationFailed(failed))
    } else {
        Ok(())
    }
}
