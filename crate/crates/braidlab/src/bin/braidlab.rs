//! Command-line experiment runner.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error.

use braidlab::runner::{self, ExperimentConfig, Operation};
use braidlab::Error;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "braidlab",
    about = "Majorana braiding laboratory on Kitaev-lattice spin models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the configuration seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for report-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Suppress the timestamp header line (and timing columns), making
    /// reruns byte-identical.
    #[arg(long, global = true)]
    no_header_timestamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the conserved-quantity / effective-Hamiltonian / gauge-field
    /// verification suites.
    Verify,
    /// Project the Hamiltonian onto code sectors over an angle grid.
    Effective,
    /// Compute the Wilson-loop holonomy of the configured braid path.
    Holonomy,
    /// Execute the configured braid and report process tomography scores.
    Braid,
    /// Reconstruct output density matrices and the Choi matrix.
    Tomography,
    /// Sweep process fidelity over the delta_tilde x N grid.
    Sweep,
    /// Export the braid gate schedule as circuit text.
    Export,
}

impl Command {
    fn operation(&self) -> Operation {
        match self {
            Command::Verify => Operation::Verify,
            Command::Effective => Operation::Effective,
            Command::Holonomy => Operation::Holonomy,
            Command::Braid => Operation::Braid,
            Command::Tomography => Operation::Tomography,
            Command::Sweep => Operation::Sweep,
            Command::Export => Operation::Export,
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let text = std::fs::read_to_string(path)?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if let Some(op) = config.operation {
        if op != cli.command.operation() {
            return Err(Error::Config(format!(
                "config operation {op:?} does not match the subcommand"
            )));
        }
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
        }
        Some(path) => std::fs::write(path, text)?,
    }
    Ok(())
}

fn json_with_header<T: serde::Serialize>(value: &T, timestamp: Option<u64>) -> String {
    let body = serde_json::to_string_pretty(value).expect("report serialization");
    match timestamp {
        Some(ts) => format!("{{\"generated_at_unix\": {ts}, \"report\": {body}}}\n"),
        None => format!("{body}\n"),
    }
}

fn timestamp(cli: &Cli) -> Option<u64> {
    if cli.no_header_timestamp {
        None
    } else {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let config = load_config(cli)?;
    let ts = timestamp(cli);
    match cli.command {
        Command::Verify => {
            let report = runner::run_verify(&config)?;
            emit(cli, &json_with_header(&report, ts))?;
            Ok(report.passed)
        }
        Command::Effective => {
            let report = runner::run_effective(&config)?;
            emit(cli, &json_with_header(&report, ts))?;
            Ok(true)
        }
        Command::Holonomy => {
            let report = runner::run_holonomy(&config)?;
            emit(cli, &json_with_header(&report, ts))?;
            Ok(true)
        }
        Command::Braid => {
            let report = runner::run_braid_tomography(&config)?;
            emit(cli, &json_with_header(&report, ts))?;
            Ok(true)
        }
        Command::Tomography => {
            let report = runner::run_tomography(&config)?;
            emit(cli, &json_with_header(&report, ts))?;
            Ok(true)
        }
        Command::Sweep => {
            let rows = runner::run_sweep(&config, ts.is_some())?;
            let text = match cli.format {
                OutputFormat::Csv => runner::sweep_to_csv(&rows, ts),
                OutputFormat::Json => json_with_header(&rows, ts),
            };
            emit(cli, &text)?;
            Ok(true)
        }
        Command::Export => {
            let text = runner::run_export(&config)?;
            emit(cli, &text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("braidlab: {e}");
            match e {
                Error::Config(_) | Error::Parse(_) | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
