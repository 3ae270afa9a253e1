//! `fpscp` command line.
//!
//! Standard output carries only `key=value` lines. Diagnostics go to standard
//! error. Exit codes: 0 success, 1 infeasible decode or invalid solution,
//! 2 usage error, 3 I/O or parse error.

mod perm_spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fpscp::fixed_route::FixedRouteOptions;
use fpscp::harness::{
    decode_with, generate_instance, run_comparison, run_front_size_sweep, run_timing, Config, InstanceParams,
    MethodOptions, SweepParam, SweepSpec, TimingOptions, TimingRow,
};
use fpscp::io::{
    emit_instance, emit_permutations, emit_solution, parse_instance, parse_permutations, parse_solution,
    write_results, Format,
};
use fpscp::permgen::{generate, PermGenConfig};
use fpscp::split::split;
use fpscp::{validate, ChargingMatrix, Instance, Method, Permutation};
use log::warn;

#[derive(Parser)]
#[command(
    name = "fpscp",
    version,
    about = "Decode customer permutations into electric vehicle routes"
)]
struct Cli {
    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true, env = "FPSCP_THREADS")]
    threads: Option<usize>,
    /// `key = value` file with sweep settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode one permutation.
    Decode(DecodeArgs),
    /// Split one permutation into routes, ignoring the battery.
    Split(SplitArgs),
    /// Write seeded permutations of an instance.
    GenPerms(GenPermsArgs),
    /// Write a random unit-square instance.
    GenInstance(GenInstanceArgs),
    /// Front-size sweep over one instance parameter.
    Sweep(SweepArgs),
    /// Decode the same permutations with several methods and report gaps.
    Compare(CompareArgs),
    /// Time the decoders.
    Time(TimeArgs),
    /// Check a solution file against an instance.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct PermChoice {
    /// Permutation file, one order per line.
    #[arg(long, conflicts_with = "order")]
    perm: Option<PathBuf>,
    /// Line of the permutation file to use (0-based, comments skipped).
    #[arg(long, default_value_t = 0, requires = "perm")]
    index: usize,
    /// Inline order such as `2,0,1`. Identity when neither this nor `--perm` is given.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    perm: PermChoice,
    #[arg(long, default_value = "fp")]
    method: Method,
    /// Keep the single-stop decoder away from the depot as a charger.
    #[arg(long)]
    no_depot_station: bool,
    #[arg(long)]
    emit_solution: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    perm: PermChoice,
}

#[derive(Args)]
struct GenPermsArgs {
    #[arg(long)]
    instance: PathBuf,
    /// `knn:k=2:count=1000` or `uniform:count=N`, optionally `:seed=S`.
    #[arg(long, default_value = "knn:k=2:count=1000")]
    perms: String,
    /// Overrides the seed in `--perms`.
    #[arg(long)]
    seed: Option<u64>,
    /// Standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenInstanceArgs {
    #[arg(long, default_value_t = 100)]
    customers: usize,
    #[arg(long, default_value_t = 10)]
    stations: usize,
    #[arg(long, default_value_t = 2.0)]
    battery: f64,
    #[arg(long, default_value_t = 200.0)]
    cargo: f64,
    #[arg(long, default_value_t = 10.0)]
    max_demand: f64,
    #[arg(long, default_value_t = 1.0)]
    consumption: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// customer_count, station_count, battery_capacity or cargo_capacity.
    #[arg(long)]
    param: Option<SweepParam>,
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long)]
    instances_per_point: Option<usize>,
    #[arg(long)]
    perms_per_instance: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    customers: Option<usize>,
    #[arg(long)]
    stations: Option<usize>,
    #[arg(long)]
    battery: Option<f64>,
    #[arg(long)]
    cargo: Option<f64>,
    #[arg(long)]
    max_demand: Option<f64>,
    #[arg(long)]
    consumption: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Batch {
    /// Instance files, or directories scanned for `*.evrp`.
    #[arg(long, num_args = 1.., required = true)]
    instances: Vec<PathBuf>,
    #[arg(long, default_value = "knn:k=2:count=1000")]
    perms: String,
    /// Overrides the seed in `--perms`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "fp,fr,ss")]
    methods: Vec<Method>,
    #[arg(long)]
    no_depot_station: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    batch: Batch,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    /// Per-instance, per-method solve rates and gap percentiles.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Empirical CDF of the gaps.
    #[arg(long)]
    ecdf: Option<PathBuf>,
}

#[derive(Args)]
struct TimeArgs {
    #[command(flatten)]
    batch: Batch,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    /// Count building the charging matrix in every measurement.
    #[arg(long)]
    include_matrix: bool,
    /// Time the distance-only paths.
    #[arg(long)]
    no_reconstruction: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    /// Expected customer order. Without it the solution's own order is taken.
    #[command(flatten)]
    perm: PermChoice,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

type Outcome = Result<ExitCode, Failure>;

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: error.into(),
    }
}

fn io_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 3,
        error: error.into(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            warn!("thread pool: {e}");
        }
    }
    let config = match cli.config.as_deref().map(load_config).transpose() {
        Ok(c) => c,
        Err(f) => return report(f),
    };
    let result = match cli.command {
        Command::Decode(a) => run_decode(a),
        Command::Split(a) => run_split(a),
        Command::GenPerms(a) => run_gen_perms(a),
        Command::GenInstance(a) => run_gen_instance(a),
        Command::Sweep(a) => run_sweep(a, config.unwrap_or_default()),
        Command::Compare(a) => run_compare(a),
        Command::Time(a) => run_time(a),
        Command::Validate(a) => run_validate(a),
    };
    result.unwrap_or_else(report)
}

fn report(failure: Failure) -> ExitCode {
    eprintln!("error: {:#}", failure.error);
    ExitCode::from(failure.code)
}

fn load_config(path: &Path) -> Result<Config, Failure> {
    let text = read(path)?;
    Config::parse(&text)
        .with_context(|| path.display().to_string())
        .map_err(io_error)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(io_error)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(io_error)
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?)
        .with_context(|| path.display().to_string())
        .map_err(io_error)
}

/// Files as given, directories expanded to their `*.evrp` entries in name order.
fn load_instances(paths: &[PathBuf]) -> Result<Vec<Instance>, Failure> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .with_context(|| format!("listing {}", path.display()))
                .map_err(io_error)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "evrp"))
                .collect();
            found.sort();
            if found.is_empty() {
                warn!("no .evrp files in {}", path.display());
            }
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    files.iter().map(|p| load_instance(p)).collect()
}

fn load_permutation(choice: &PermChoice, instance: &Instance) -> Result<Permutation, Failure> {
    let n = instance.num_customers();
    if let Some(order) = &choice.order {
        return Permutation::new(order.clone(), n).map_err(usage);
    }
    let Some(path) = &choice.perm else {
        return Ok(Permutation::identity(n));
    };
    let perms = parse_permutations(&read(path)?, n)
        .with_context(|| path.display().to_string())
        .map_err(io_error)?;
    let count = perms.len();
    perms.into_iter().nth(choice.index).ok_or_else(|| {
        usage(anyhow!(
            "{} holds {count} permutations, index {} requested",
            path.display(),
            choice.index
        ))
    })
}

fn perm_config(spec: &str, seed: Option<u64>) -> Result<PermGenConfig, Failure> {
    let mut config = perm_spec::parse(spec).map_err(|e| usage(anyhow!(e)))?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn method_options(no_depot_station: bool) -> MethodOptions {
    MethodOptions {
        single_stop: FixedRouteOptions {
            allow_depot_as_station: !no_depot_station,
            ..FixedRouteOptions::default()
        },
    }
}

fn run_decode(args: DecodeArgs) -> Outcome {
    let instance = load_instance(&args.instance)?;
    let perm = load_permutation(&args.perm, &instance)?;
    let matrix = ChargingMatrix::build(&instance);
    let result = decode_with(
        args.method,
        &instance,
        &matrix,
        &perm,
        &method_options(args.no_depot_station),
    );
    println!("instance={}", instance.name());
    println!("method={}", args.method);
    println!("time_s={}", result.stats.elapsed.as_secs_f64());
    println!("max_front={}", result.stats.max_front);
    let Some(solution) = result.solution() else {
        println!("outcome=infeasible");
        return Ok(ExitCode::from(1));
    };
    println!("outcome=solved");
    println!("distance={}", solution.total_distance);
    println!("routes={}", solution.routes().len());
    println!("stations={}", solution.stations_visited());
    if let Some(path) = &args.emit_solution {
        write(path, emit_solution(solution).as_bytes())?;
        println!("solution={}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_split(args: SplitArgs) -> Outcome {
    let instance = load_instance(&args.instance)?;
    let perm = load_permutation(&args.perm, &instance)?;
    let Some(plan) = split(&instance, &perm) else {
        println!("outcome=infeasible");
        return Ok(ExitCode::from(1));
    };
    println!("outcome=solved");
    println!("distance={}", plan.total_distance);
    println!("routes={}", plan.routes.len());
    for route in &plan.routes {
        let ids: Vec<String> = route.iter().map(usize::to_string).collect();
        println!("route={}", ids.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_gen_perms(args: GenPermsArgs) -> Outcome {
    let instance = load_instance(&args.instance)?;
    let config = perm_config(&args.perms, args.seed)?;
    let text = emit_permutations(&generate(&instance, &config));
    match &args.out {
        Some(path) => {
            write(path, text.as_bytes())?;
            println!("count={}", config.count);
            println!("out={}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_gen_instance(args: GenInstanceArgs) -> Outcome {
    let params = InstanceParams {
        customers: args.customers,
        stations: args.stations,
        battery_capacity: args.battery,
        cargo_capacity: args.cargo,
        max_demand: args.max_demand,
        consumption_rate: args.consumption,
    };
    let positive = |v: f64| v > 0.0 && v.is_finite();
    for (flag, v) in [
        ("--battery", params.battery_capacity),
        ("--cargo", params.cargo_capacity),
        ("--max-demand", params.max_demand),
        ("--consumption", params.consumption_rate),
    ] {
        if !positive(v) {
            return Err(usage(anyhow!("{flag} must be positive")));
        }
    }
    if params.max_demand > params.cargo_capacity {
        return Err(usage(anyhow!("--max-demand exceeds --cargo")));
    }
    let text = emit_instance(&generate_instance(&params, args.seed));
    match &args.out {
        Some(path) => {
            write(path, text.as_bytes())?;
            println!("out={}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(args: SweepArgs, mut config: Config) -> Outcome {
    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            config.set(key, v);
        }
    };
    set("param", args.param.map(|p| p.name().to_string()));
    set(
        "grid",
        args.grid
            .map(|g| g.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
    );
    set("instances", args.instances_per_point.map(|v| v.to_string()));
    set("perms", args.perms_per_instance.map(|v| v.to_string()));
    set("k", args.k.map(|v| v.to_string()));
    set("seed", args.seed.map(|v| v.to_string()));
    set("customers", args.customers.map(|v| v.to_string()));
    set("stations", args.stations.map(|v| v.to_string()));
    set("battery", args.battery.map(|v| v.to_string()));
    set("cargo", args.cargo.map(|v| v.to_string()));
    set("max_demand", args.max_demand.map(|v| v.to_string()));
    set("consumption", args.consumption.map(|v| v.to_string()));
    let spec = SweepSpec::from_config(&config).map_err(usage)?;
    let report = run_front_size_sweep(&spec).map_err(|e| usage(anyhow!(e)))?;
    write(&args.out, report.to_csv().as_bytes())?;
    for point in &report.points {
        let s = &point.summary;
        println!(
            "value={} runs={} infeasible={} mean={} median={} max={}",
            point.value, s.count, point.infeasible, s.mean, s.median, s.max
        );
    }
    println!("out={}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn run_compare(args: CompareArgs) -> Outcome {
    let instances = load_instances(&args.batch.instances)?;
    let perms = perm_config(&args.batch.perms, args.batch.seed)?;
    let cmp = run_comparison(
        &instances,
        &perms,
        &args.batch.methods,
        &method_options(args.batch.no_depot_station),
    );
    let format = match args.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Jsonl => Format::Jsonl,
    };
    let mut buf = Vec::new();
    write_results(&cmp.rows, format, &mut buf).map_err(io_error)?;
    write(&args.out, &buf)?;
    if let Some(path) = &args.summary {
        let mut buf = Vec::new();
        cmp.report.write_summary_csv(&mut buf).map_err(io_error)?;
        write(path, &buf)?;
    }
    if let Some(path) = &args.ecdf {
        let mut buf = Vec::new();
        cmp.report.write_ecdf_csv(&mut buf).map_err(io_error)?;
        write(path, &buf)?;
    }
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    for s in &cmp.report.summaries {
        println!(
            "instance={} method={} feasible={} solved={} solved_pct={} zero_gap_pct={} p90={} p95={}",
            s.instance,
            s.method,
            s.feasible,
            s.solved,
            s.solved_pct,
            s.zero_gap_pct,
            opt(s.p90),
            opt(s.p95)
        );
    }
    for v in &cmp.report.violations {
        warn!("{v}");
    }
    println!("rows={}", cmp.rows.len());
    println!("violations={}", cmp.report.violations.len());
    println!("out={}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn run_time(args: TimeArgs) -> Outcome {
    if args.repetitions == 0 {
        return Err(usage(anyhow!("--repetitions must be at least 1")));
    }
    let instances = load_instances(&args.batch.instances)?;
    let perms = perm_config(&args.batch.perms, args.batch.seed)?;
    let options = TimingOptions {
        repetitions: args.repetitions,
        include_matrix_build: args.include_matrix,
        include_reconstruction: !args.no_reconstruction,
        methods: method_options(args.batch.no_depot_station),
    };
    let rows = run_timing(&instances, &perms, &args.batch.methods, &options);
    let mut buf = Vec::new();
    TimingRow::write_csv(&rows, &mut buf).map_err(io_error)?;
    write(&args.out, &buf)?;
    for r in &rows {
        println!(
            "instance={} method={} samples={} median_s={}",
            r.instance, r.method, r.samples, r.median_s
        );
    }
    println!("out={}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn run_validate(args: ValidateArgs) -> Outcome {
    let instance = load_instance(&args.instance)?;
    let solution = parse_solution(&read(&args.solution)?)
        .with_context(|| args.solution.display().to_string())
        .map_err(io_error)?;
    let perm = if args.perm.perm.is_some() || args.perm.order.is_some() {
        load_permutation(&args.perm, &instance)?
    } else {
        match Permutation::new(solution.customer_order(), instance.num_customers()) {
            Ok(p) => p,
            Err(e) => {
                println!("valid=false");
                eprintln!("customer visits: {e}");
                println!("violations=1");
                return Ok(ExitCode::from(1));
            }
        }
    };
    match validate(&instance, &perm, &solution) {
        Ok(()) => {
            println!("valid=true");
            Ok(ExitCode::SUCCESS)
        }
        Err(violations) => {
            println!("valid=false");
            for v in &violations {
                eprintln!("{v}");
            }
            println!("violations={}", violations.len());
            Ok(ExitCode::from(1))
        }
    }
}
