use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::{Config, ConfigError};
use super::generate::{generate_instance, InstanceParams};
use super::stats::Summary;
use crate::charging::ChargingMatrix;
use crate::io::fmt_sig;
use crate::joint::JointDecoder;
use crate::permgen::{derive_seed, mix64, stochastic_knn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    CustomerCount,
    StationCount,
    BatteryCapacity,
    CargoCapacity,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::CustomerCount => "customer_count",
            SweepParam::StationCount => "station_count",
            SweepParam::BatteryCapacity => "battery_capacity",
            SweepParam::CargoCapacity => "cargo_capacity",
        }
    }

    fn apply(self, base: &InstanceParams, value: f64) -> InstanceParams {
        let mut p = *base;
        match self {
            SweepParam::CustomerCount => p.customers = value as usize,
            SweepParam::StationCount => p.stations = value as usize,
            SweepParam::BatteryCapacity => p.battery_capacity = value,
            SweepParam::CargoCapacity => p.cargo_capacity = value,
        }
        p
    }

    fn is_count(self) -> bool {
        matches!(self, SweepParam::CustomerCount | SweepParam::StationCount)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "customer_count" | "customers" => Ok(SweepParam::CustomerCount),
            "station_count" | "stations" => Ok(SweepParam::StationCount),
            "battery_capacity" | "battery" => Ok(SweepParam::BatteryCapacity),
            "cargo_capacity" | "cargo" => Ok(SweepParam::CargoCapacity),
            other => Err(format!("unknown sweep parameter `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: Vec<f64>,
    pub instances_per_point: usize,
    pub permutations_per_instance: usize,
    /// Neighbourhood size of the stochastic kNN permutations.
    pub knn_k: usize,
    pub base: InstanceParams,
    pub seed: u64,
}

impl SweepSpec {
    /// Baseline study: 32 instances x 32 kNN (k = 2) permutations per grid point.
    pub fn new(param: SweepParam, grid: Vec<f64>, seed: u64) -> Self {
        SweepSpec {
            param,
            grid,
            instances_per_point: 32,
            permutations_per_instance: 32,
            knn_k: 2,
            base: InstanceParams::default(),
            seed,
        }
    }

    /// Reads `param`, `grid`, `instances`, `perms`, `k`, `seed` and the base
    /// parameters `customers`, `stations`, `battery`, `cargo`, `max_demand`,
    /// `consumption`. Missing keys keep the baseline defaults.
    pub fn from_config(config: &Config) -> Result<Self, ConfigError> {
        let param = config
            .get::<SweepParam>("param")?
            .unwrap_or(SweepParam::CustomerCount);
        let grid = config
            .list("grid")?
            .unwrap_or_else(|| vec![25.0, 50.0, 100.0, 200.0]);
        let mut spec = SweepSpec::new(param, grid, config.get("seed")?.unwrap_or(0));
        if let Some(v) = config.get("instances")? {
            spec.instances_per_point = v;
        }
        if let Some(v) = config.get("perms")? {
            spec.permutations_per_instance = v;
        }
        if let Some(v) = config.get("k")? {
            spec.knn_k = v;
        }
        let b = &mut spec.base;
        if let Some(v) = config.get("customers")? {
            b.customers = v;
        }
        if let Some(v) = config.get("stations")? {
            b.stations = v;
        }
        if let Some(v) = config.get("battery")? {
            b.battery_capacity = v;
        }
        if let Some(v) = config.get("cargo")? {
            b.cargo_capacity = v;
        }
        if let Some(v) = config.get("max_demand")? {
            b.max_demand = v;
        }
        if let Some(v) = config.get("consumption")? {
            b.consumption_rate = v;
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.grid.is_empty() {
            return Err("sweep grid is empty".into());
        }
        for &v in &self.grid {
            let bad_count = self.param.is_count() && (v.fract() != 0.0 || v < 0.0);
            let bad_real = !self.param.is_count() && !(v.is_finite() && v > 0.0);
            if bad_count || bad_real || (self.param == SweepParam::CustomerCount && v < 1.0) {
                return Err(format!("invalid grid value {v} for {}", self.param));
            }
        }
        if self.instances_per_point == 0 || self.permutations_per_instance == 0 || self.knn_k == 0 {
            return Err("instances, perms and k must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    /// Largest front of every decode at this grid point, in run order.
    pub max_fronts: Vec<usize>,
    pub infeasible: usize,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub param: SweepParam,
    pub seed: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    pub const CSV_HEADER: &'static str = "param,value,runs,infeasible,mean,q1,median,q3,min,max";

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for p in &self.points {
            let s = &p.summary;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                self.param,
                fmt_sig(p.value, 12),
                s.count,
                p.infeasible,
                fmt_sig(s.mean, 12),
                fmt_sig(s.q1, 12),
                fmt_sig(s.median, 12),
                fmt_sig(s.q3, 12),
                fmt_sig(s.min, 12),
                fmt_sig(s.max, 12),
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Maximum front size of the exact decoder across random instances and kNN permutations.
///
/// Instance `i` of grid point `p` uses seed `derive_seed(derive_seed(seed, p), i)`;
/// its permutation `j` uses `derive_seed(mix64(instance_seed), j)`.
pub fn run_front_size_sweep(spec: &SweepSpec) -> Result<SweepReport, String> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.grid.len());
    for (p, &value) in spec.grid.iter().enumerate() {
        let params = spec.param.apply(&spec.base, value);
        let point_seed = derive_seed(spec.seed, p as u64);
        let per_instance: Vec<(Vec<usize>, usize)> = (0..spec.instances_per_point)
            .into_par_iter()
            .map(|i| {
                let inst_seed = derive_seed(point_seed, i as u64);
                let instance = generate_instance(&params, inst_seed);
                let matrix = ChargingMatrix::build(&instance);
                let decoder = JointDecoder::new(&instance, &matrix);
                let perm_master = mix64(inst_seed);
                let mut fronts = Vec::with_capacity(spec.permutations_per_instance);
                let mut infeasible = 0;
                for j in 0..spec.permutations_per_instance {
                    let perm = stochastic_knn(&instance, spec.knn_k, derive_seed(perm_master, j as u64));
                    let result = decoder.decode(&perm);
                    if !result.is_solved() {
                        infeasible += 1;
                    }
                    fronts.push(result.stats.max_front);
                }
                (fronts, infeasible)
            })
            .collect();
        let max_fronts: Vec<usize> = per_instance.iter().flat_map(|(f, _)| f.iter().copied()).collect();
        let infeasible = per_instance.iter().map(|(_, k)| k).sum();
        let as_f64: Vec<f64> = max_fronts.iter().map(|&v| v as f64).collect();
        points.push(SweepPoint {
            value,
            summary: Summary::of(&as_f64).expect("at least one run"),
            max_fronts,
            infeasible,
        });
    }
    Ok(SweepReport {
        param: spec.param,
        seed: spec.seed,
        points,
    })
}
