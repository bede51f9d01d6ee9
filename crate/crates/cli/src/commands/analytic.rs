use fadeq::analytic::{decay_rate, mean_delay, mean_queue_length, stationary_distribution};
use serde_json::{json, Value};

use super::stable_load;
use crate::args::AnalyticArgs;
use crate::error::CliError;
use crate::output::{json_bytes, OutputSet, MANIFEST_NAME};

fn tagged(value: f64, formula: &str) -> Value {
    json!({ "value": value, "formula": formula })
}

pub fn report(theta: f64, tail_tol: f64) -> Result<Value, CliError> {
    let load = stable_load(theta)?;
    let pi = stationary_distribution(load, tail_tol)?;
    let d = mean_delay(load)?;
    Ok(json!({
        "theta": tagged(theta, "theta = L_p / nu = R / (W rho)"),
        "pi": {
            "values": pi.probabilities,
            "formula": "pi_k = phi_(k-1) - phi_k, phi_k = (1 - theta) sum_(j>=1) Poisson(k + j; j theta), phi_(-1) = 1",
            "tail_tolerance": tail_tol,
            "tail_mass_bound": pi.tail_mass_bound,
            "series_remainder_bound": pi.series_remainder_bound,
        },
        "mean_queue": tagged(mean_queue_length(load), "E[L] = theta (2 - theta) / (2 (1 - theta))"),
        "decay_rate": tagged(
            decay_rate(load)?,
            "pi_(k+1) / pi_k -> 1 / z*, z* = x / theta with x > 1 solving x e^(-x) = theta e^(-theta)",
        ),
        "E_T": tagged(d.mean_service, "E[T] = theta"),
        "E_W": tagged(d.mean_wait, "E[W] = theta^2 / (2 (1 - theta))"),
        "E_V": tagged(d.mean_vestige, "E[V] = 1/2 + int_0^1 (x - 1) e^(-theta/x) dx"),
        "E_D": tagged(d.mean_delay, "E[D] = E[T] + E[W] + E[V]"),
    }))
}

fn text(results: &Value) -> String {
    let mut out = String::new();
    out.push_str(&format!("theta = {}\n", results["theta"]["value"]));
    for (k, p) in results["pi"]["values"].as_array().into_iter().flatten().enumerate() {
        out.push_str(&format!("pi[{k}] = {p}\n"));
    }
    out.push_str(&format!("tail_mass_bound = {}\n", results["pi"]["tail_mass_bound"]));
    for key in ["mean_queue", "decay_rate", "E_T", "E_W", "E_V", "E_D"] {
        out.push_str(&format!("{key} = {}\n", results[key]["value"]));
    }
    out
}

pub fn run(args: &AnalyticArgs) -> Result<(), CliError> {
    let resolved = args.point.resolve()?;
    let results = report(resolved.theta, args.tail_tol)?;
    let mut doc = json!({ "parameters": resolved.describe(), "results": results });
    if let Some(dir) = &args.out_dir {
        doc["manifest"] = json!(MANIFEST_NAME);
        let mut out = OutputSet::create(dir)?;
        out.write("analytic.json", &json_bytes(&doc)?)?;
        let mut params = resolved.describe();
        params["tail_tol"] = json!(args.tail_tol);
        out.finish("analytic", params, vec![])?;
    }
    if args.json {
        print!("{}", String::from_utf8_lossy(&json_bytes(&doc)?));
    } else {
        print!("{}", text(&doc["results"]));
    }
    Ok(())
}
