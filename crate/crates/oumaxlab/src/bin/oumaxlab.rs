use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use oumaxlab::harness::{render_report, run_experiment, ExperimentConfig, OutputFormat};
use oumaxlab::Error;

/// Monte Carlo experiments for Ornstein-Uhlenbeck extremes, excursion
/// coupling, Darling-Erdos limits, integral tests, and lacunary series.
#[derive(Debug, Parser)]
#[command(name = "oumaxlab", version)]
struct Cli {
    /// Experiment name: coupling-mismatch, blockmax-limit, de-walk
    /// (alias: walkmax), ou-de, gauge-classify, lacunary,
    /// localtime-moments, tau-moments, envelope-trace.
    experiment: String,

    /// Master seed; replica i draws from substream mix(seed, i).
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of replicas in this run.
    #[arg(long, default_value_t = 100)]
    replicas: u64,

    /// First replica index (for splitting a run across invocations).
    #[arg(long, default_value_t = 0)]
    replica_offset: u64,

    /// Output format.
    #[arg(long, default_value = "csv")]
    format: String,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Experiment parameter, repeatable: -P key=value. Keys per
    /// experiment are listed in docs/output-schema.md.
    #[arg(short = 'P', long = "param", value_name = "KEY=VALUE")]
    param: Vec<String>,

    // Convenience flags for the common parameters; equivalent to -P.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gauge: Option<String>,
    #[arg(long)]
    ratio: Option<u64>,
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    #[arg(long)]
    horizon: Option<f64>,
}

fn build_params(cli: &Cli) -> Result<BTreeMap<String, String>, Error> {
    let mut params = BTreeMap::new();
    for raw in &cli.param {
        let (k, v) = raw
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("bad -P value `{raw}`, expected key=value")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    macro_rules! flag {
        ($field:expr, $key:literal) => {
            if let Some(v) = &$field {
                params.insert($key.to_string(), v.to_string());
            }
        };
    }
    flag!(cli.n, "n");
    flag!(cli.t, "t");
    flag!(cli.step, "step");
    flag!(cli.epsilon, "epsilon");
    flag!(cli.level, "level");
    flag!(cli.dist, "dist");
    flag!(cli.family, "family");
    flag!(cli.q, "q");
    flag!(cli.alpha, "alpha");
    flag!(cli.gauge, "gauge");
    flag!(cli.ratio, "ratio");
    flag!(cli.t_grid, "t-grid");
    flag!(cli.horizon, "horizon");
    Ok(params)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) | Error::UnknownExperiment(_) => 2,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    if let Ok(workers) = std::env::var("OUMAXLAB_WORKERS") {
        let workers: usize = workers
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("OUMAXLAB_WORKERS=`{workers}` is not a count")))?;
        // Ignore the error if a pool already exists (e.g. repeated calls).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let format = OutputFormat::parse(&cli.format)?;
    let config = ExperimentConfig {
        experiment: cli.experiment.clone(),
        seed: cli.seed,
        replicas: cli.replicas,
        replica_offset: cli.replica_offset,
        params: build_params(cli)?,
    };
    let started = Instant::now();
    let report = run_experiment(&config)?;
    let rendered = render_report(&report, format);
    match &cli.out {
        Some(path) => std::fs::write(path, rendered).map_err(Error::from)?,
        None => print!("{rendered}"),
    }
    eprintln!(
        "{}: {} replicas in {:.2}s",
        cli.experiment,
        cli.replicas,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
