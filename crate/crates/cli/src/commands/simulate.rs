use fadeq::channel::CapacityMode;
use fadeq::sim::{default_warmup, replicate, simulate, Engine, Histogram, SimConfig, Workload};
use serde_json::json;

use crate::args::{CapacityArg, EngineArg, SimulateArgs};
use crate::error::CliError;
use crate::output::{csv_bytes, json_bytes, OutputSet, MANIFEST_NAME};

pub const HISTOGRAM_HEADER: [&str; 2] = ["value", "count"];

pub fn build_config(args: &SimulateArgs) -> Result<SimConfig, CliError> {
    let resolved = args.point.resolve()?;
    let engine = match args.engine {
        EngineArg::Continuous => Engine::Continuous,
        EngineArg::Discrete => Engine::Discrete,
    };
    let capacity_mode = match args.capacity {
        CapacityArg::LowSnr => CapacityMode::LowSnr,
        CapacityArg::Exact => CapacityMode::Exact,
    };
    let workload = match resolved.physical {
        None if capacity_mode == CapacityMode::Exact => {
            return Err(CliError::Invalid("exact capacity needs a channel: add --rho or --noise-psd".into()));
        }
        None => Workload::Load(resolved.theta),
        Some((mut channel, traffic)) => {
            if capacity_mode == CapacityMode::Exact && channel.link.is_none() {
                channel.link = Some(args.point.reference_link(channel.bandwidth, channel.snr)?);
            }
            Workload::Physical { channel, traffic }
        }
    };
    let warmup = args.warmup.unwrap_or_else(|| default_warmup(resolved.theta));
    if args.blocks == 0 {
        return Err(CliError::Invalid("--blocks must be positive".into()));
    }
    let config = SimConfig {
        engine,
        capacity_mode,
        workload,
        num_blocks: args.blocks.checked_add(warmup).ok_or_else(|| CliError::Invalid("too many blocks".into()))?,
        warmup_blocks: warmup,
        seed: args.seed,
        replications: args.replications,
    };
    config.validate()?;
    Ok(config)
}

fn histogram_csv(h: &Histogram) -> Result<Vec<u8>, CliError> {
    csv_bytes(&HISTOGRAM_HEADER, h.pairs())
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let config = build_config(args)?;
    let resolved = args.point.resolve()?;
    if config.theta() >= 1.0 {
        eprintln!("warning: θ = {} ≥ 1, the queue is unstable and will grow without bound", config.theta());
    }
    let mut out = OutputSet::create(&args.out_dir)?;
    let seeds: Vec<u64> = (0..config.replications as u64).map(|r| config.seed.wrapping_add(r)).collect();

    if config.replications == 1 {
        let stats = simulate(&config)?;
        let summary = stats.summary();
        let mut doc = serde_json::to_value(&stats).map_err(|e| CliError::Invalid(e.to_string()))?;
        doc["summary"] = json!(summary);
        doc["manifest"] = json!(MANIFEST_NAME);
        out.write("stats.json", &json_bytes(&doc)?)?;
        out.write("queue_departure.csv", &histogram_csv(&stats.queue_length_histogram_departure)?)?;
        out.write("queue_boundary.csv", &histogram_csv(&stats.queue_length_histogram_boundary)?)?;
        out.write("service_time.csv", &histogram_csv(&stats.service_time_histogram)?)?;
        println!("packets           {}", summary.packets);
        println!(
            "mean delay        {:.6} ± {:.6} blocks (95% CI)",
            summary.mean_delay.mean,
            summary.mean_delay.ci_high - summary.mean_delay.mean
        );
        if let Some(v) = summary.mean_vestige {
            println!("mean vestige      {:.6} ± {:.6}", v.mean, v.ci_high - v.mean);
        }
        println!("mean queue        {:.6} (departures)  {:.6} (block boundaries)", summary.mean_queue_departure, summary.mean_queue_boundary);
        println!("empty fraction    {:.6}", summary.empty_fraction_departure);
        if stats.metadata.overflow_flagged {
            eprintln!("warning: {:.3e} of the queue mass fell in the overflow bin", stats.metadata.overflow_mass);
        }
    } else {
        let report = replicate(&config)?;
        let mut doc = serde_json::to_value(&report).map_err(|e| CliError::Invalid(e.to_string()))?;
        doc["manifest"] = json!(MANIFEST_NAME);
        out.write("replicate.json", &json_bytes(&doc)?)?;
        out.write("queue_departure.csv", &histogram_csv(&report.queue_length_histogram_departure)?)?;
        out.write("queue_boundary.csv", &histogram_csv(&report.queue_length_histogram_boundary)?)?;
        out.write("service_time.csv", &histogram_csv(&report.service_time_histogram)?)?;
        let d = report.mean_delay;
        println!("replications      {}", report.replications);
        println!("mean delay        {:.6} [{:.6}, {:.6}] blocks (95% CI)", d.mean, d.ci_low, d.ci_high);
        println!("mean queue        {:.6}", report.mean_queue_departure.mean);
    }

    let mut params = resolved.describe();
    params["engine"] = json!(config.engine);
    params["capacity_mode"] = json!(config.capacity_mode);
    params["post_warmup_blocks"] = json!(args.blocks);
    params["warmup_blocks"] = json!(config.warmup_blocks);
    params["replications"] = json!(config.replications);
    if let Workload::Physical { channel, .. } = &config.workload {
        if let Some(link) = &channel.link {
            params["noise_psd_w_per_hz"] = json!(link.noise_psd);
            params["tx_power_w"] = json!(link.tx_power);
        }
    }
    let manifest = out.finish("simulate", params, seeds)?;
    println!("wrote {}", manifest.display());
    Ok(())
}
