//! Experiment drivers: random instances, front-size sweeps, method comparison
//! against the exact decoder, and decode timing.
//!
//! Work is spread over the rayon pool per instance or per permutation; every
//! random draw comes from a seed derived from the run's master seed and the
//! item's index, and results are collected in index order, so output does not
//! depend on the number of threads.

mod compare;
mod config;
mod generate;
mod stats;
mod sweep;
mod timing;

pub use compare::{run_comparison, Comparison, GapReport, MethodSummary, ZERO_GAP_RTOL};
pub use config::{Config, ConfigError};
pub use generate::{generate_instance, InstanceParams};
pub use stats::{ecdf, quantile, Summary};
pub use sweep::{run_front_size_sweep, SweepParam, SweepPoint, SweepReport, SweepSpec};
pub use timing::{run_timing, TimingOptions, TimingRow};

use crate::charging::ChargingMatrix;
use crate::fixed_route::{split_then_fr_fla, split_then_ss_fr_fla, FixedRouteOptions};
use crate::io::Method;
use crate::joint;
use crate::model::{DecodeResult, Instance, Permutation};

/// Settings shared by the decoders a harness run may call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MethodOptions {
    pub single_stop: FixedRouteOptions,
}

/// Runs one decoder on one permutation. The split-based methods include the split in their time.
pub fn decode_with(
    method: Method,
    instance: &Instance,
    matrix: &ChargingMatrix,
    permutation: &Permutation,
    options: &MethodOptions,
) -> DecodeResult {
    match method {
        Method::Joint => joint::decode(instance, matrix, permutation),
        Method::FixedRoute => split_then_fr_fla(instance, matrix, permutation),
        Method::SingleStop => split_then_ss_fr_fla(instance, permutation, options.single_stop),
    }
}
