use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use opinion3wd::commands::{self, MetricsOptions};
use opinion3wd::{CliResult, ConfigFile};

/// Linguistic three-way-decision opinion dynamics on a co-evolving network.
#[derive(Parser)]
#[command(name = "opinion3wd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one model and write its trajectory
    Run(RunArgs),
    /// Run several models from the same initial opinions
    Compare(RunArgs),
    /// Run one model for every seed in a range
    Sweep(SweepArgs),
    /// Recompute metrics from an existing opinions CSV
    Metrics(MetricsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated model list, e.g. `degroot-uniform,hk-homogeneous:0.1`
    #[arg(long)]
    models: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Inclusive range, `1..100`
    #[arg(long)]
    seeds: String,
    /// Model to sweep; defaults to the config's model
    #[arg(long)]
    models: Option<String>,
    /// Also write every seed's full trajectory under `seed_<n>/`
    #[arg(long)]
    per_seed: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// opinions.csv written by `run`
    #[arg(long)]
    input: PathBuf,
    /// Directory holding network_<k>.edges; the complete graph if omitted
    #[arg(long)]
    networks: Option<PathBuf>,
    #[arg(long, default_value_t = opinion3wd_core::metrics::DEFAULT_MAX_DEVIATION)]
    d_max: f64,
    #[arg(long)]
    cluster_tolerance: Option<f64>,
    /// Directory for metrics.csv; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run(a) => {
            let cfg = ConfigFile::load(&a.config)?;
            let m = commands::run(&cfg, &a.out, a.seed, a.models.as_deref())?;
            eprintln!("wrote {} files to {}", m.outputs.len(), a.out.display());
        }
        Command::Compare(a) => {
            let cfg = ConfigFile::load(&a.config)?;
            let m = commands::compare(&cfg, &a.out, a.seed, a.models.as_deref())?;
            eprintln!("wrote {} files to {}", m.outputs.len(), a.out.display());
        }
        Command::Sweep(a) => {
            let seeds = commands::parse_seed_range(&a.seeds)?;
            let cfg = ConfigFile::load(&a.config)?;
            commands::sweep(&cfg, &a.out, seeds, a.models.as_deref(), a.per_seed)?;
            eprintln!("wrote {} to {}", commands::SWEEP_CSV, a.out.display());
        }
        Command::Metrics(a) => {
            let opts = MetricsOptions {
                input: a.input,
                networks: a.networks,
                d_max: a.d_max,
                cluster_tolerance: a.cluster_tolerance,
            };
            commands::metrics_command(&opts, a.out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
