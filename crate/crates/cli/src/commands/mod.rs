pub mod analytic;
pub mod simulate;
pub mod sweep;
pub mod verify;

use fadeq::analytic::{Load, MAX_LOAD, MIN_LOAD};

use crate::error::CliError;

/// θ as an analytic load, with the stability message for θ ≥ 1.
pub fn stable_load(theta: f64) -> Result<Load<f64>, CliError> {
    if theta >= 1.0 {
        return Err(CliError::Invalid(format!(
            "unstable load θ = {theta}: the queue has a stationary regime only for θ < 1"
        )));
    }
    Load::new(theta).map_err(|_| {
        CliError::Invalid(format!("θ = {theta} is outside the supported window [{MIN_LOAD}, {MAX_LOAD}]"))
    })
}
