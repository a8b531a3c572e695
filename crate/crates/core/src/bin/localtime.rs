//! Command-line front end: simulation, limit sampling, metrics, experiments, oracle.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use planar_localtime::harness::{
    run_experiment, write_run, ExperimentConfig, ExperimentId, ExperimentParams,
};
use planar_localtime::limit::{sample_grid, sample_jump_times};
use planar_localtime::metrics::{
    j1_jump_gap_lower_bound, m1_distance, uniform_distance, MetricReport, MonotonePath, Polyline,
    StepPath, DEFAULT_MAX_VERTICES,
};
use planar_localtime::parallel::with_threads;
use planar_localtime::rng::StreamFactory;
use planar_localtime::scaling::{build_rescaled_path, path_csv, points_csv};
use planar_localtime::walk::oracle::enumerate_local_time_distribution;
use planar_localtime::walk::{simulate_walk_returns, Kernel};
use planar_localtime::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "localtime",
    version,
    about = "Local time of the planar simple random walk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one walk and print its rescaled local-time path as `t,value` CSV.
    Simulate(SimulateArgs),
    /// Sample the limit process on a grid, or its jump times above epsilon.
    SampleLimit(SampleLimitArgs),
    /// Distances between two monotone paths.
    Metric(MetricArgs),
    /// Run one of the canonical experiments E1..E6.
    Experiment(Box<ExperimentArgs>),
    /// Exact distribution of the local time by enumeration, as CSV.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replica index within the seed's stream family.
    #[arg(long, default_value_t = 0)]
    replica: u64,
    #[arg(long, default_value_t = Kernel::Skip)]
    kernel: Kernel,
    /// Evaluate on this many equal intervals instead of printing breakpoints.
    #[arg(long)]
    resolution: Option<usize>,
    /// Print the return times instead of the path.
    #[arg(long)]
    returns: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleLimitArgs {
    /// Comma-separated increasing grid in (0, 1].
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["points", "epsilon"])]
    grid: Option<Vec<f64>>,
    /// Use the grid k/points, k = 1..=points.
    #[arg(long, conflicts_with = "epsilon")]
    points: Option<usize>,
    /// Print the jump times in [epsilon, 1] instead of grid values.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricArgs {
    /// `t,value` CSV file, `step:<at>`, or `staircase:<start>,<window>,<steps>`.
    #[arg(long)]
    f: String,
    /// Same forms as `--f`.
    #[arg(long)]
    g: String,
    #[arg(long, default_value_t = 1e-3)]
    resolution: f64,
    #[arg(long, default_value_t = 1e-5)]
    mesh: f64,
    /// Number of equal intervals for the uniform distance grid.
    #[arg(long, default_value_t = 10_000)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// E1..E6.
    id: ExperimentId,
    /// Full configuration as JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    kernel: Option<Kernel>,
    /// Output directory for summary.json, samples.csv, plot.py and timing.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "LOCALTIME_THREADS", default_value_t = 0)]
    threads: usize,
    /// Exit with status 2 when any acceptance check fails.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    radius: Option<Vec<u64>>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    staircase: Option<Vec<usize>>,
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long)]
    mesh: Option<f64>,
    /// Grid k/points for the sampled limit paths.
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    pairings: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let rng = StreamFactory::new(args.seed).stream(args.replica);
    let rec = simulate_walk_returns(args.n, rng, args.kernel)?;
    let text = if args.returns {
        let mut s = String::from("k\n");
        for r in rec.returns() {
            s.push_str(&format!("{r}\n"));
        }
        s
    } else {
        let path = build_rescaled_path(&rec)?;
        match args.resolution {
            Some(r) => path_csv(&path, r),
            None => points_csv(path.breakpoints()),
        }
    };
    emit(args.out.as_deref(), &text)
}

fn sample_limit(args: SampleLimitArgs) -> Result<()> {
    let mut rng = StreamFactory::new(args.seed).stream(0);
    let text = if let Some(eps) = args.epsilon {
        let seq = sample_jump_times(eps, &mut rng)?;
        let mut s = String::from("t\n");
        for t in &seq.times {
            s.push_str(&format!("{t}\n"));
        }
        s
    } else {
        let grid = match (args.grid, args.points) {
            (Some(g), _) => g,
            (None, Some(k)) if k > 0 => (1..=k).map(|i| i as f64 / k as f64).collect(),
            _ => {
                return Err(Error::InvalidArgument(
                    "give --grid, --points or --epsilon".into(),
                ))
            }
        };
        points_csv(&sample_grid(&grid, &mut rng)?.points())
    };
    emit(args.out.as_deref(), &text)
}

fn parse_path(spec: &str) -> Result<Polyline> {
    let numbers = |s: &str| -> Result<Vec<f64>> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad number '{p}' in '{spec}'")))
            })
            .collect()
    };
    if let Some(rest) = spec.strip_prefix("step:") {
        match numbers(rest)?.as_slice() {
            [at] => StepPath::unit_step(*at).completed_graph(),
            _ => Err(Error::InvalidArgument(format!(
                "expected step:<at>, got '{spec}'"
            ))),
        }
    } else if let Some(rest) = spec.strip_prefix("staircase:") {
        match numbers(rest)?.as_slice() {
            [start, window, steps] if *steps >= 1.0 && steps.fract() == 0.0 => {
                StepPath::staircase(*start, *window, *steps as usize).completed_graph()
            }
            _ => Err(Error::InvalidArgument(format!(
                "expected staircase:<start>,<window>,<steps>, got '{spec}'"
            ))),
        }
    } else {
        Polyline::from_csv(&fs::read_to_string(spec)?)?.completed_graph()
    }
}

fn metric(args: MetricArgs) -> Result<()> {
    let f = parse_path(&args.f)?;
    let g = parse_path(&args.g)?;
    let k = args.grid.max(1);
    let grid: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
    let reports: Vec<MetricReport> = vec![
        m1_distance(&f, &g, args.resolution, args.max_vertices)?,
        j1_jump_gap_lower_bound(&f, &g, args.mesh)?,
        uniform_distance(&f, &g, &grid)?,
    ];
    println!("{}", serde_json::to_string_pretty(&reports)?);
    Ok(())
}

fn unused(flag: &str, id: ExperimentId) -> Error {
    Error::InvalidArgument(format!("--{flag} does not apply to {id}"))
}

fn build_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let id = args.id;
    let mut config = match &args.config {
        Some(path) => {
            let c: ExperimentConfig = serde_json::from_str(&fs::read_to_string(path)?)?;
            if c.id() != id {
                return Err(Error::InvalidArgument(format!(
                    "config file describes {}, not {id}",
                    c.id()
                )));
            }
            c
        }
        None => ExperimentConfig::new(id, 5_000, 0),
    };
    if let Some(r) = args.replicas {
        config.replicas = r;
    }
    if let Some(s) = args.seed {
        config.master_seed = s;
    }
    if let Some(k) = args.kernel {
        config.kernel = k;
    }
    macro_rules! set {
        ($field:ident, $flag:literal, $slot:expr) => {
            if let Some(v) = &args.$field {
                match $slot {
                    Some(slot) => *slot = v.clone(),
                    None => return Err(unused($flag, id)),
                }
            }
        };
    }
    let p = &mut config.params;
    set!(
        n,
        "n",
        match p {
            ExperimentParams::E1 { n }
            | ExperimentParams::E2 { n, .. }
            | ExperimentParams::E4 { n }
            | ExperimentParams::E5 { n, .. }
            | ExperimentParams::E6 { n, .. } => Some(n),
            ExperimentParams::E3 { .. } => None,
        }
    );
    set!(
        s,
        "s",
        match p {
            ExperimentParams::E2 { s, .. } | ExperimentParams::E5 { s, .. } => Some(s),
            _ => None,
        }
    );
    set!(
        t,
        "t",
        match p {
            ExperimentParams::E2 { t, .. } => Some(t),
            _ => None,
        }
    );
    set!(
        radius,
        "radius",
        match p {
            ExperimentParams::E3 { radius, .. } => Some(radius),
            _ => None,
        }
    );
    set!(
        cap,
        "cap",
        match p {
            ExperimentParams::E3 { cap, .. } => Some(cap),
            _ => None,
        }
    );
    set!(
        epsilon,
        "epsilon",
        match p {
            ExperimentParams::E5 { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    );
    set!(
        delta,
        "delta",
        match p {
            ExperimentParams::E6 { delta, .. } => Some(delta),
            _ => None,
        }
    );
    set!(
        eta,
        "eta",
        match p {
            ExperimentParams::E6 { eta, .. } => Some(eta),
            _ => None,
        }
    );
    set!(
        staircase,
        "staircase",
        match p {
            ExperimentParams::E6 { staircase, .. } => Some(staircase),
            _ => None,
        }
    );
    set!(
        resolution,
        "resolution",
        match p {
            ExperimentParams::E6 { resolution, .. } => Some(resolution),
            _ => None,
        }
    );
    set!(
        mesh,
        "mesh",
        match p {
            ExperimentParams::E6 { mesh, .. } => Some(mesh),
            _ => None,
        }
    );
    set!(
        pairings,
        "pairings",
        match p {
            ExperimentParams::E6 { pairings, .. } => Some(pairings),
            _ => None,
        }
    );
    if let Some(k) = args.grid_points {
        match p {
            ExperimentParams::E6 { grid, .. } if k > 0 => {
                *grid = (1..=k).map(|i| i as f64 / k as f64).collect();
            }
            ExperimentParams::E6 { .. } => {
                return Err(Error::InvalidArgument(
                    "--grid-points must be positive".into(),
                ))
            }
            _ => return Err(unused("grid-points", id)),
        }
    }
    config.validate()?;
    Ok(config)
}

/// Returns whether every check passed.
fn experiment(args: ExperimentArgs) -> Result<bool> {
    let config = build_config(&args)?;
    let started = Instant::now();
    let run = with_threads(args.threads, || run_experiment(&config))??;
    let seconds = started.elapsed().as_secs_f64();
    match &args.out {
        Some(dir) => {
            write_run(dir, &run)?;
            let timing = json!({ "wall_clock_seconds": seconds, "threads": args.threads });
            fs::write(
                dir.join("timing.json"),
                serde_json::to_string_pretty(&timing)?,
            )?;
        }
        None => println!("{}", run.summary.to_json()?),
    }
    for c in &run.summary.checks {
        eprintln!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    eprintln!("{} finished in {seconds:.2} s", config.id());
    Ok(!args.check || run.summary.all_passed())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let pmf = enumerate_local_time_distribution(args.n)?;
    emit(args.out.as_deref(), &pmf.to_csv())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a).map(|()| true),
        Command::SampleLimit(a) => sample_limit(a).map(|()| true),
        Command::Metric(a) => metric(a).map(|()| true),
        Command::Experiment(a) => experiment(*a),
        Command::Oracle(a) => oracle(a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
