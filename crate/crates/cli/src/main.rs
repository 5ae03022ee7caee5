//! `qsearch`: deterministic trial grids over the simulated search
//! procedures, scaling-exponent fits, and the significance verdict table.

mod experiment;
mod records;
mod reproduce;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsearch_core::{
    collision_range, distinctness_range, gen_distinctness_instance, gen_one_to_one, gen_two_to_one,
    verify_answer, AlgorithmId, Answer, FunctionInstance, Metric, Promise, RunConfig,
};

use experiment::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

#[derive(Parser)]
#[command(
    name = "qsearch",
    about = "Query-counted search algorithm workbench",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm over a size grid and emit one record per trial.
    Run(RunArgs),
    /// Fit a power-law exponent to previously written records.
    Fit(FitArgs),
    /// Run the full pipeline and print the significance verdict table.
    ReproducePaper(ReproduceArgs),
    /// Generate a problem instance as JSON.
    GenInstance(GenArgs),
    /// Check a claimed answer against an instance file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PromiseArg {
    OneToOne,
    TwoToOne,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Queries,
    TimeSteps,
    Hardware,
    WallTime,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Queries => Metric::Queries,
            MetricArg::TimeSteps => Metric::TimeSteps,
            MetricArg::Hardware => Metric::Hardware,
            MetricArg::WallTime => Metric::WallTime,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm to run.
    #[arg(long = "alg")]
    algorithm: AlgorithmArg,
    /// Single instance size (alternative to --grid).
    #[arg(long, conflicts_with = "grid")]
    n: Option<u64>,
    /// Comma-separated ascending size grid.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<u64>,
    /// Trials per size.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Master seed; trial seeds derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Promise for collision-problem instances.
    #[arg(long, value_enum, default_value = "two-to-one")]
    promise: PromiseArg,
    /// Planted collision pairs for distinctness instances.
    #[arg(long, default_value_t = 1)]
    planted: u64,
    /// Marked items for parallel search.
    #[arg(long, default_value_t = 1)]
    marked: u64,
    /// Simulated processors (parallel search).
    #[arg(long, default_value_t = 1)]
    procs: u64,
    /// Whole-algorithm repetitions before giving up.
    #[arg(long, default_value_t = 3)]
    reps: u32,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: OutputFormat,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug)]
struct AlgorithmArg(AlgorithmId);

impl ValueEnum for AlgorithmArg {
    fn value_variants<'a>() -> &'a [Self] {
        const VARIANTS: [AlgorithmArg; 7] = [
            AlgorithmArg(AlgorithmId::NaiveCollision),
            AlgorithmArg(AlgorithmId::ClassicalBirthday),
            AlgorithmArg(AlgorithmId::ClassicalSortDistinctness),
            AlgorithmArg(AlgorithmId::NaiveDistinctness),
            AlgorithmArg(AlgorithmId::ParallelSearch),
            AlgorithmArg(AlgorithmId::BhtCollision),
            AlgorithmArg(AlgorithmId::TwoLevelDistinctness),
        ];
        &VARIANTS
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.0.name()))
    }
}

#[derive(Args)]
struct FitArgs {
    /// Records file: JSON-lines trials or aggregated CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "queries")]
    metric: MetricArg,
    /// Optional JSON output path for the fit(s).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Trials per grid point for the exponent fits.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Trials per processor count in the parallel sweep.
    #[arg(long, default_value_t = 600)]
    parallel_trials: u64,
    /// Optional JSON output path for the verdict table.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InstanceKind {
    OneToOne,
    TwoToOne,
    Distinctness,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: InstanceKind,
    #[arg(long)]
    n: u64,
    /// Range cardinality; defaults to n for collision instances and 2n
    /// for distinctness.
    #[arg(long)]
    range: Option<u64>,
    /// Planted collision pairs (distinctness only).
    #[arg(long, default_value_t = 1)]
    planted: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance JSON produced by gen-instance.
    #[arg(long)]
    instance: PathBuf,
    /// Claimed answer, e.g. "collision(3,17)", "one-to-one",
    /// "all-distinct", "found(42)", "not-found".
    #[arg(long)]
    answer: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run(args) => cmd_run(args),
        Command::Fit(args) => cmd_fit(args),
        Command::ReproducePaper(args) => cmd_reproduce(args),
        Command::GenInstance(args) => cmd_gen_instance(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing stdout: {e}"))),
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let n_grid = match (&args.n, args.grid.is_empty()) {
        (Some(n), true) => vec![*n],
        (None, false) => args.grid.clone(),
        (None, true) => return Err(CliError::Usage("provide --n or --grid".into())),
        (Some(_), false) => unreachable!("clap conflicts_with"),
    };
    let config = ExperimentConfig {
        algorithm: args.algorithm.0,
        n_grid,
        trials: args.trials,
        master_seed: args.seed,
        promise: match args.promise {
            PromiseArg::OneToOne => Promise::OneToOne,
            PromiseArg::TwoToOne => Promise::TwoToOne,
        },
        planted_pairs: args.planted,
        marked_count: args.marked,
        processors: args.procs,
        run: RunConfig {
            repetitions: args.reps,
            ..RunConfig::default()
        },
    };
    config.validate()?;
    let records = config.execute()?;

    let mut buf = Vec::new();
    match args.format {
        OutputFormat::Jsonl => records::write_jsonl(&mut buf, &records)?,
        OutputFormat::Csv => records::write_csv(&mut buf, &records::aggregate(&records))?,
        OutputFormat::Table => render_aggregate_table(&mut buf, &records::aggregate(&records))?,
    }
    write_output(args.out.as_ref(), &buf)
}

fn render_aggregate_table(buf: &mut Vec<u8>, rows: &[records::AggregateRow]) -> anyhow::Result<()> {
    writeln!(
        buf,
        "{:<28} {:>10} {:>7} {:>18} {:>14} {:>14}",
        "algorithm", "n", "trials", "metric", "mean", "stddev"
    )?;
    for r in rows {
        writeln!(
            buf,
            "{:<28} {:>10} {:>7} {:>18} {:>14.4} {:>14.4}",
            r.algorithm, r.n, r.trials, r.metric, r.mean, r.stddev
        )?;
    }
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let metric: Metric = args.metric.into();
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("reading {}: {e}", args.input.display())))?;

    let by_algorithm = if text.starts_with(records::CSV_HEADER) {
        records::points_from_rows(&records::read_csv(&text)?, metric)
    } else {
        records::points_from_records(&records::read_jsonl(&text)?, metric)
    };
    if by_algorithm.is_empty() {
        return Err(CliError::Usage(
            "no records for the requested metric".into(),
        ));
    }

    let mut fits = Vec::new();
    for (algorithm, points) in &by_algorithm {
        if points.len() < 3 {
            return Err(CliError::Usage(format!(
                "{algorithm}: fits need at least 3 distinct sizes, got {}",
                points.len()
            )));
        }
        let fit = records::fit_points(metric, points)?;
        println!(
            "{:<28} {:<12} exponent {:>8.4}  intercept {:>8.4}  r^2 {:>8.6}  ({} sizes)",
            algorithm,
            metric.to_string(),
            fit.exponent,
            fit.intercept,
            fit.r_squared,
            points.len()
        );
        fits.push((algorithm.clone(), fit));
    }
    if let Some(out) = &args.out {
        let json: serde_json::Value = fits
            .iter()
            .map(|(a, f)| (a.clone(), serde_json::to_value(f).unwrap()))
            .collect::<serde_json::Map<_, _>>()
            .into();
        write_output(
            Some(out),
            serde_json::to_string_pretty(&json).unwrap().as_bytes(),
        )?;
    }
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    if args.trials == 0 || args.parallel_trials == 0 {
        return Err(CliError::Usage("trial counts must be positive".into()));
    }
    let result = reproduce::run(args.seed, args.trials, args.parallel_trials)?;
    print!("{}", result.render_table());
    if let Some(out) = &args.out {
        write_output(
            Some(out),
            serde_json::to_string_pretty(&result.to_json())
                .unwrap()
                .as_bytes(),
        )?;
    }
    Ok(())
}

fn cmd_gen_instance(args: GenArgs) -> Result<(), CliError> {
    let instance: FunctionInstance = match args.kind {
        InstanceKind::OneToOne => gen_one_to_one(
            args.n,
            args.range.unwrap_or_else(|| collision_range(args.n)),
            args.seed,
        ),
        InstanceKind::TwoToOne => gen_two_to_one(
            args.n,
            args.range.unwrap_or_else(|| collision_range(args.n)),
            args.seed,
        ),
        InstanceKind::Distinctness => gen_distinctness_instance(
            args.n,
            args.planted,
            args.range.unwrap_or_else(|| distinctness_range(args.n)),
            args.seed,
        ),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut json = serde_json::to_string_pretty(&instance).unwrap();
    json.push('\n');
    write_output(args.out.as_ref(), json.as_bytes())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.instance).map_err(|e| {
        CliError::Runtime(anyhow::anyhow!("reading {}: {e}", args.instance.display()))
    })?;
    let instance: FunctionInstance =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("instance file: {e}")))?;
    instance
        .validate()
        .map_err(|e| CliError::Usage(format!("instance file: {e}")))?;
    let answer: Answer = args
        .answer
        .parse()
        .map_err(|e| CliError::Usage(format!("answer: {e}")))?;
    println!("{}", verify_answer(&instance, &answer));
    Ok(())
}
