//! Queueing analysis of a constant-rate stream over a buffered, low-SNR block
//! Rayleigh fading channel.
//!
//! In the low-SNR regime the service a block offers is exponential, so by the
//! memoryless property the integer number of blocks a packet needs is Poisson(θ)
//! with θ = L_p/ν. The buffer then behaves as a discrete-time D/G/1 queue whose
//! stationary distribution and mean delay have closed forms ([`analytic`]).
//! Two independent routes check those formulas: a truncated Markov chain solved
//! numerically ([`markov`]) and a Monte Carlo block simulator ([`sim`]).
//!
//! The analytic modules are generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.
//!
//! ```
//! use fadeq::analytic::{mean_delay, stationary_distribution, Load};
//!
//! let load = Load::new(0.5f64).unwrap();
//! let pi = stationary_distribution(load, 1e-10).unwrap();
//! assert!((pi.probabilities[0] - 0.5).abs() < 1e-12);
//! let d = mean_delay(load).unwrap();
//! assert!((d.mean_delay - 1.14496).abs() < 1e-5);
//! ```

pub mod analytic;
pub mod channel;
pub mod markov;
pub mod scalar;
pub mod sim;
pub mod special;

pub use scalar::Real;

pub type Load = analytic::Load<f64>;
pub type ChannelParams = channel::ChannelParams<f64>;
pub type LinkBudget = channel::LinkBudget<f64>;
pub type TrafficParams = channel::TrafficParams<f64>;
pub type ServiceDistribution = analytic::ServiceDistribution<f64>;
pub type StationaryDistribution = analytic::StationaryDistribution<f64>;
pub type DelayBreakdown = analytic::DelayBreakdown<f64>;
pub type VestigeModel = analytic::VestigeModel<f64>;
pub type TruncatedChain = markov::TruncatedChain<f64>;
pub type QuadratureResult = special::QuadratureResult<f64>;

pub type StationaryDistributionF32 = analytic::StationaryDistribution<f32>;
pub type DelayBreakdownF32 = analytic::DelayBreakdown<f32>;
