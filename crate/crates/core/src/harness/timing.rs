use std::io::Write;
use std::time::Instant;

use super::stats::Summary;
use super::{decode_with, MethodOptions};
use crate::charging::ChargingMatrix;
use crate::fixed_route::{fr_fla_distance, ss_fr_fla_distance};
use crate::io::{fmt_sig, Method};
use crate::joint::JointDecoder;
use crate::model::{Instance, Permutation};
use crate::permgen::{generate, PermGenConfig};
use crate::split::split;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimingOptions {
    pub repetitions: usize,
    /// Build the charging matrix inside every timed decode instead of once per instance.
    pub include_matrix_build: bool,
    /// Time full decodes; when off, only the optimal distance is computed.
    pub include_reconstruction: bool,
    pub methods: MethodOptions,
}

impl Default for TimingOptions {
    fn default() -> Self {
        TimingOptions {
            repetitions: 1,
            include_matrix_build: false,
            include_reconstruction: true,
            methods: MethodOptions::default(),
        }
    }
}

/// Wall-clock quartiles, in seconds, over every permutation and repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub instance: String,
    pub method: Method,
    pub samples: usize,
    pub median_s: f64,
    pub q1_s: f64,
    pub q3_s: f64,
    pub include_matrix_build: bool,
    pub include_reconstruction: bool,
}

impl TimingRow {
    pub const CSV_HEADER: &'static str =
        "instance,method,samples,median_s,q1_s,q3_s,include_matrix_build,include_reconstruction";

    pub fn write_csv<W: Write>(rows: &[TimingRow], mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.instance,
                r.method,
                r.samples,
                fmt_sig(r.median_s, 12),
                fmt_sig(r.q1_s, 12),
                fmt_sig(r.q3_s, 12),
                r.include_matrix_build,
                r.include_reconstruction,
            )?;
        }
        Ok(())
    }
}

fn time_once(
    method: Method,
    instance: &Instance,
    shared: &ChargingMatrix,
    perm: &Permutation,
    options: &TimingOptions,
) -> f64 {
    let start = Instant::now();
    let owned;
    let matrix = if options.include_matrix_build && method != Method::SingleStop {
        owned = ChargingMatrix::build(instance);
        &owned
    } else {
        shared
    };
    if options.include_reconstruction {
        std::hint::black_box(decode_with(method, instance, matrix, perm, &options.methods));
    } else {
        let d = match method {
            Method::Joint => JointDecoder::new(instance, matrix).optimal_distance(perm),
            Method::FixedRoute => split(instance, perm).and_then(|p| fr_fla_distance(instance, matrix, &p)),
            Method::SingleStop => split(instance, perm)
                .and_then(|p| ss_fr_fla_distance(instance, &p, options.methods.single_stop)),
        };
        std::hint::black_box(d);
    }
    start.elapsed().as_secs_f64()
}

/// Decode times per method and instance. Runs sequentially so measurements do
/// not compete for cores.
pub fn run_timing(
    instances: &[Instance],
    perms: &PermGenConfig,
    methods: &[Method],
    options: &TimingOptions,
) -> Vec<TimingRow> {
    assert!(options.repetitions >= 1, "repetitions must be at least 1");
    let mut rows = Vec::new();
    if methods.is_empty() {
        return rows;
    }
    for instance in instances {
        let matrix = ChargingMatrix::build(instance);
        let permutations = generate(instance, perms);
        for &method in methods {
            let mut samples = Vec::with_capacity(permutations.len() * options.repetitions);
            for perm in &permutations {
                for _ in 0..options.repetitions {
                    samples.push(time_once(method, instance, &matrix, perm, options));
                }
            }
            let Some(s) = Summary::of(&samples) else {
                continue;
            };
            rows.push(TimingRow {
                instance: instance.name().to_string(),
                method,
                samples: s.count,
                median_s: s.median,
                q1_s: s.q1,
                q3_s: s.q3,
                include_matrix_build: options.include_matrix_build,
                include_reconstruction: options.include_reconstruction,
            });
        }
    }
    rows
}
