use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fio_nuclear::CancelToken;
use fio_nuclear_cli::{
    load_scenario_with, run_command, write_artifacts, CliError, Command, Format, Overrides, RunContext, THREADS_ENV,
};

#[derive(Debug, Parser)]
#[command(name = "fio-nuclear", version)]
#[command(about = "Fourier integral operators: apply, kernels, traces, spectra and nuclearity checks")]
struct Cli {
    /// Pipeline to run.
    #[arg(value_enum)]
    command: Command,

    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,

    /// Output directory; the primary result goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Write SVG plots (report only).
    #[arg(long)]
    plots: bool,

    /// Base seed for random profiles, overriding the scenario.
    #[arg(long)]
    seed: Option<u64>,

    /// Grid size, overriding `grid.N`.
    #[arg(long = "grid-N")]
    grid_n: Option<i64>,

    /// Certification tolerance for verify.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::validation(THREADS_ENV, format!("expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::io(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let overrides = Overrides {
        seed: cli.seed,
        grid_n: cli.grid_n,
        tolerance: cli.tolerance,
        format: cli.format,
        plots: cli.plots,
    };
    let scenario = load_scenario_with(&cli.scenario, &overrides)?;
    let cancel = CancelToken::new();
    let trigger = cancel.clone();
    // A handler may already be installed when embedded; cancellation is then
    // simply unavailable.
    let _ = ctrlc::set_handler(move || trigger.cancel());
    let artifacts = run_command(cli.command, &scenario, &RunContext { cancel: Some(cancel) })?;
    match &cli.out {
        Some(dir) => write_artifacts(dir, &artifacts),
        None => {
            let (primary, rest) = artifacts.split_first().expect("every command yields a result");
            std::io::stdout()
                .write_all(&primary.bytes)
                .map_err(|e| CliError::io(format!("cannot write to stdout: {e}")))?;
            write_artifacts(std::path::Path::new("."), rest)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
