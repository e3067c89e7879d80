// SPDX-License-Identifier: MIT OR Apache-2.0

#![forbid(unsafe_code)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wemgsc::benchmark::{run_benchmark, BenchmarkOptions};
use wemgsc::io::{
    read_series, write_detect_csv, write_detect_json, write_simulation_csv, ColumnSelector,
};
use wemgsc::metrics::format_table;
use wemgsc::{
    detect, ConfigOverrides, Error, EstimationMode, GapMethod, Result, SimModel, SimSpec,
};

/// Change point detection in the mean of autocorrelated time series.
///
/// Locations are reported as the 1-based index of the last observation
/// before each change.
#[derive(Parser)]
#[command(name = "wemgsc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect change points in one column of a CSV file.
    Detect(DetectArgs),
    /// Write a simulated series as CSV.
    Simulate(SimulateArgs),
    /// Run Monte Carlo replications and report size, power and accuracy.
    Benchmark(BenchmarkArgs),
}

#[derive(Args)]
struct TuningArgs {
    /// Intervals per recursion of the path search.
    #[arg(long = "Rn")]
    rn: Option<usize>,
    /// Maximum number of path entries used to build models.
    #[arg(long = "Q")]
    q: Option<usize>,
    /// Maximum number of nested models.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Maximum AR order.
    #[arg(long)]
    pmax: Option<usize>,
    /// Minimum distance between candidate change points.
    #[arg(long)]
    min_spacing: Option<usize>,
    /// Penalty exponent: the penalty is log(n)^exp.
    #[arg(long)]
    xi_exponent: Option<f64>,
    /// Re-localise the selected change points (default).
    #[arg(long, overrides_with = "no_refine")]
    refine: bool,
    #[arg(long, overrides_with = "refine")]
    no_refine: bool,
    #[arg(long, value_enum)]
    estimation: Option<Estimation>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl TuningArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            intervals: self.rn,
            max_candidates: self.q,
            max_models: self.m,
            max_ar_order: self.pmax,
            min_spacing: self.min_spacing,
            penalty_exponent: self.xi_exponent,
            gap_method: None,
            refine: if self.no_refine {
                Some(false)
            } else {
                self.refine.then_some(true)
            },
            estimation: self.estimation.map(Into::into),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ld,
    Dc,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodChoice {
    Ld,
    Dc,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Estimation {
    Global,
    Segmentwise,
}

impl From<Estimation> for EstimationMode {
    fn from(e: Estimation) -> Self {
        match e {
            Estimation::Global => Self::Global,
            Estimation::Segmentwise => Self::Segmentwise,
        }
    }
}

impl From<Method> for GapMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Ld => Self::Ld,
            Method::Dc => Self::Dc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct DetectArgs {
    /// Input CSV file, or `-` for standard input.
    input: PathBuf,
    /// Column to read: header name or 0-based index (default: first numeric column).
    #[arg(long)]
    column: Option<String>,
    #[arg(long, value_enum, default_value = "ld")]
    gap_method: Method,
    /// Accepted for interface stability; detection itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    tuning: TuningArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Model id, M1 to M13.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Series length (default: the model's own).
    #[arg(long)]
    n: Option<usize>,
    /// Noise only.
    #[arg(long)]
    null: bool,
    /// Also write the signal `f` and the `is_cp` indicator.
    #[arg(long)]
    with_truth: bool,
    /// Replication index.
    #[arg(long, default_value_t = 0)]
    rep: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Model id; repeat for several.
    #[arg(long = "model", required_unless_present = "all")]
    models: Vec<String>,
    /// All models M1 to M13.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "ld")]
    gap_method: MethodChoice,
    /// JSON report (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Text table (default: standard error).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Per-replication estimated locations as JSON.
    #[arg(long)]
    plot_data: Option<PathBuf>,
    #[command(flatten)]
    tuning: TuningArgs,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn cmd_detect(args: &DetectArgs) -> Result<()> {
    set_threads(args.tuning.threads)?;
    let column = args
        .column
        .as_deref()
        .map(str::parse::<ColumnSelector>)
        .transpose()?;
    let x = if args.input.as_os_str() == "-" {
        read_series(io::stdin().lock(), column.as_ref())?
    } else {
        read_series(File::open(&args.input)?, column.as_ref())?
    };
    let mut overrides = args.tuning.overrides();
    overrides.gap_method = Some(args.gap_method.into());
    let result = detect(&x, &overrides.resolve(x.len()))?;
    let mut out = sink(args.output.as_deref())?;
    match args.format {
        Format::Json => write_detect_json(&mut out, &result)?,
        Format::Csv => write_detect_csv(&mut out, &result)?,
    }
    out.flush()?;
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let model: SimModel = args.model.parse()?;
    let mut spec = SimSpec::new(model, args.seed)
        .null(args.null)
        .stream(args.rep);
    if let Some(n) = args.n {
        spec = spec.with_length(n);
    }
    let sim = wemgsc::simulate(&spec)?;
    let mut out = sink(args.output.as_deref())?;
    write_simulation_csv(&mut out, &sim, args.with_truth)?;
    out.flush()?;
    Ok(())
}

fn cmd_benchmark(args: &BenchmarkArgs) -> Result<()> {
    set_threads(args.tuning.threads)?;
    let models: Vec<SimModel> = if args.all {
        SimModel::ALL.to_vec()
    } else {
        args.models
            .iter()
            .map(|m| m.parse())
            .collect::<Result<_>>()?
    };
    let mut opts = BenchmarkOptions::new(models, args.reps, args.seed);
    opts.methods = match args.gap_method {
        MethodChoice::Ld => vec![GapMethod::Ld],
        MethodChoice::Dc => vec![GapMethod::Dc],
        MethodChoice::Both => vec![GapMethod::Ld, GapMethod::Dc],
    };
    opts.overrides = args.tuning.overrides();
    let outcome = run_benchmark(&opts)?;

    let mut out = sink(args.output.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &outcome.reports)?;
    writeln!(out)?;
    out.flush()?;
    let table = format_table(&outcome.reports);
    match &args.table {
        Some(p) => std::fs::write(p, table)?,
        None => eprint!("{table}"),
    }
    if let Some(p) = &args.plot_data {
        let mut w = BufWriter::new(File::create(p)?);
        serde_json::to_writer(&mut w, &outcome.plot)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Benchmark(a) => cmd_benchmark(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
