//! Command-line front end: single runs, parameter sweeps and analysis of
//! existing price series. All output goes under `--out`.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use hetmarket::analysis::AnalysisReport;
use hetmarket::market::rng_from_seed;
use hetmarket::series::{read_series, write_series};
use hetmarket::sweep::{
    aggregate, apply_overrides, execute_sweep_with, parse_override, write_aggregate_csv,
    write_rows_csv, SweepOptions, SweepSpec,
};
use hetmarket::{run, MarketConfig, SimError};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "hetmarket", version, about = "Heterogeneous-agent stock market simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one market and write its time series and report.
    Run(RunArgs),
    /// Run every grid point and replication of a sweep config.
    Sweep(SweepArgs),
    /// Analyze an existing time-series CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file; defaults apply to missing keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Override a config key, e.g. `memory=5` or `grid.g_max=[100,200]`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Suppress the per-run log line
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    /// Also write each run's series to `<out>/series/g<grid>_r<rep>.csv`
    #[arg(long)]
    dump_series: bool,
    /// Fill the wall_time_ms column (makes output non-reproducible)
    #[arg(long)]
    wall_time: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Series CSV with at least a `price` column
    #[arg(long)]
    input: PathBuf,
}

/// Error carrying its exit code.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Analyze(args) => cmd_analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(e) | Failure::Runtime(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}

/// Reads the config document and applies `--set` overrides.
fn load_spec(common: &Common) -> Result<SweepSpec> {
    let mut doc = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))
                .map_err(usage)?;
            serde_json::from_str(&text)
                .with_context(|| format!("cannot parse config {}", path.display()))
                .map_err(usage)?
        }
        None => Value::Object(Default::default()),
    };
    let overrides = common
        .overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(usage)?;
    apply_overrides(&mut doc, &overrides).map_err(usage)?;
    let spec = SweepSpec::from_json(doc).map_err(usage)?;
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
        .map_err(runtime)
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("cannot create {}", path.display()))
        .map_err(runtime)
}

fn config_lines(config: &MarketConfig) -> String {
    let Ok(Value::Object(map)) = serde_json::to_value(config) else {
        unreachable!("config serializes to an object")
    };
    map.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

fn write_report(path: &Path, header: &str, report: &AnalysisReport) -> Result<()> {
    let mut f = create_file(path)?;
    f.write_all(header.as_bytes())
        .and_then(|_| f.write_all(report.to_text().as_bytes()))
        .and_then(|_| f.flush())
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(runtime)
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let spec = load_spec(&args.common)?;
    if !spec.grid.is_empty() {
        return Err(usage(anyhow!("invalid config field `grid`: `run` executes a single config, use `sweep`")));
    }
    let config = spec.base;
    let out_dir = &args.common.out;
    let out = run(&config, &mut rng_from_seed(config.seed)).map_err(|e| match e {
        SimError::Config(c) => usage(c),
        other => runtime(other),
    })?;
    create_out(out_dir)?;

    let series = out_dir.join("series.csv");
    let mut f = create_file(&series)?;
    write_series(&out.records, &mut f)
        .map_err(anyhow::Error::from)
        .and_then(|_| f.flush().map_err(Into::into))
        .with_context(|| format!("cannot write {}", series.display()))
        .map_err(runtime)?;

    let report = AnalysisReport::from_run(&out);
    write_report(&out_dir.join("report.txt"), &config_lines(&config), &report)?;
    if !args.common.quiet {
        eprintln!(
            "run seed={} ticks={} final_price={}",
            config.seed,
            out.records.len(),
            out.final_price
        );
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let spec = load_spec(&args.common)?;
    if args.parallelism == 0 {
        return Err(usage(anyhow!("--parallelism must be at least 1")));
    }
    let out_dir = &args.common.out;
    create_out(out_dir)?;
    let series_dir = out_dir.join("series");
    if args.dump_series {
        create_out(&series_dir)?;
    }

    let dump_errors = Mutex::new(Vec::new());
    let opts = SweepOptions {
        parallelism: args.parallelism,
        record_wall_time: args.wall_time,
    };
    let rows = execute_sweep_with(&spec, opts, |key, out| {
        if !args.common.quiet {
            eprintln!(
                "run grid={} rep={} seed={} final_price={}",
                key.grid_index, key.replication, key.seed, out.final_price
            );
        }
        if args.dump_series {
            let path = series_dir.join(format!("g{}_r{}.csv", key.grid_index, key.replication));
            let written = File::create(&path)
                .map_err(anyhow::Error::from)
                .and_then(|f| {
                    let mut w = BufWriter::new(f);
                    write_series(&out.records, &mut w)?;
                    w.flush()?;
                    Ok(())
                });
            if let Err(e) = written {
                dump_errors
                    .lock()
                    .unwrap()
                    .push(format!("{}: {e}", path.display()));
            }
        }
    })
    .map_err(usage)?;

    if !args.common.quiet {
        for row in &rows {
            if let Err(e) = &row.outcome {
                eprintln!(
                    "run grid={} rep={} seed={} failed: {e}",
                    row.key.grid_index, row.key.replication, row.key.seed
                );
            }
        }
    }
    let dump_errors = dump_errors.into_inner().unwrap();
    if let Some(e) = dump_errors.first() {
        return Err(runtime(anyhow!("cannot write series {e}")));
    }

    let params = spec.params();
    let rows_path = out_dir.join("rows.csv");
    write_rows_csv(&params, &rows, create_file(&rows_path)?)
        .with_context(|| format!("cannot write {}", rows_path.display()))
        .map_err(runtime)?;
    let agg_path = out_dir.join("aggregate.csv");
    write_aggregate_csv(&params, &aggregate(&rows), create_file(&agg_path)?)
        .with_context(|| format!("cannot write {}", agg_path.display()))
        .map_err(runtime)?;
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let spec = load_spec(&args.common)?;
    let file = File::open(&args.input)
        .with_context(|| format!("cannot open input {}", args.input.display()))
        .map_err(usage)?;
    let table = read_series(BufReader::new(file))
        .with_context(|| format!("malformed series {}", args.input.display()))
        .map_err(usage)?;
    let report = AnalysisReport::from_series(&table, spec.base.memory);
    create_out(&args.common.out)?;
    write_report(&args.common.out.join("report.txt"), "", &report)?;
    if !args.common.quiet {
        eprintln!("analyze rows={} input={}", table.price.len(), args.input.display());
    }
    Ok(())
}
