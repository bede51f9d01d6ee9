use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fadeq",
    version,
    about = "Queue length and delay of a constant-rate stream over a low-SNR block Rayleigh fading channel",
    after_help = "Any long flag can also be set from a file with --config FILE (lines of key = value); \
                  flags given on the command line win."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary queue distribution and mean delay for one operating point.
    Analytic(AnalyticArgs),
    /// Delay and queue-distribution curves over a range of loads, as CSV.
    Sweep(SweepArgs),
    /// Monte Carlo simulation of the buffer.
    Simulate(SimulateArgs),
    /// Cross-check series, matrix, simulators and closed forms.
    Verify(VerifyArgs),
}

/// Operating point: either a bare load θ or channel constants plus a rate.
#[derive(Debug, Clone, Default, Args)]
pub struct OperatingPoint {
    /// Load θ = L_p/ν (dimensionless).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Source rate R in nats/s (alternative to --theta).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Bandwidth W in Hz [default when a channel is given: 5000].
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Block length T_B in seconds [default when a channel is given: 1e-4].
    #[arg(long)]
    pub block: Option<f64>,
    /// Average received SNR ρ (linear).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Transmit power with unit suffix, e.g. -10dBW or 0.1W.
    #[arg(long, value_parser = parse_power, allow_hyphen_values = true)]
    pub tx_power: Option<f64>,
    /// Noise power spectral density N0 in W/Hz.
    #[arg(long)]
    pub noise_psd: Option<f64>,
    /// Distance d in metres [default: 1000].
    #[arg(long)]
    pub distance: Option<f64>,
    /// Path-loss exponent α [default: 4].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Rayleigh σ² [default: 1].
    #[arg(long)]
    pub sigma2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub point: OperatingPoint,
    /// Stop listing π_k once the remaining tail mass is below this.
    #[arg(long, default_value_t = 1e-12)]
    pub tail_tol: f64,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    pub json: bool,
    /// Also write analytic.json and manifest.json into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.05)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 91)]
    pub points: usize,
    /// Loads for which pi_vs_k files are written.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
    pub pi_thetas: Vec<f64>,
    /// Largest k in the pi_vs_k files.
    #[arg(long, default_value_t = 30)]
    pub max_k: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CapacityArg {
    LowSnr,
    Exact,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub point: OperatingPoint,
    #[arg(long, value_enum, default_value_t = EngineArg::Continuous)]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value_t = CapacityArg::LowSnr)]
    pub capacity: CapacityArg,
    /// Blocks simulated after warmup (accepts 1e6).
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub blocks: u64,
    /// Warmup blocks [default: max(1e4, 10/(1−θ)²)].
    #[arg(long, value_parser = parse_count)]
    pub warmup: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    /// Negate the first summand of every tail sum φ_k, k ≥ 1.
    FlipPhiSign,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
    pub thetas: Vec<f64>,
    /// Post-warmup blocks per simulation run (accepts 1e6).
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub blocks: u64,
    /// Matrix-oracle truncation N.
    #[arg(long, default_value_t = 400)]
    pub dimension: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Test hook that corrupts the series on purpose.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
    /// Also write verify.json and manifest.json into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Non-negative integer, allowing scientific notation such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(x >= 0.0 && x.fract() == 0.0 && x <= 9.007_199_254_740_992e15) {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(x as u64)
}

/// Power in watts from `<value>dBW`, `<value>dBm` or `<value>W`.
pub fn parse_power(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let (number, watts): (&str, fn(f64) -> f64) = if lower.ends_with("dbw") {
        (&t[..t.len() - 3], |v| 10f64.powf(v / 10.0))
    } else if lower.ends_with("dbm") {
        (&t[..t.len() - 3], |v| 10f64.powf((v - 30.0) / 10.0))
    } else if lower.ends_with('w') {
        (&t[..t.len() - 1], |v| v)
    } else {
        return Err(format!("`{s}` needs a unit suffix: dBW, dBm or W"));
    };
    let v: f64 = number.trim().parse().map_err(|_| format!("`{s}` is not a power"))?;
    let w = watts(v);
    if w > 0.0 && w.is_finite() {
        Ok(w)
    } else {
        Err(format!("`{s}` is not a positive power"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1000"), Ok(1000));
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn powers() {
        assert!((parse_power("-10dBW").unwrap() - 0.1).abs() < 1e-15);
        assert!((parse_power("-10 dBW").unwrap() - 0.1).abs() < 1e-15);
        assert!((parse_power("20dBm").unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(parse_power("0.25W"), Ok(0.25));
        assert!(parse_power("0.25").is_err());
        assert!(parse_power("0W").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
