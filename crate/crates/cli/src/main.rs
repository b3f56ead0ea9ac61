use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qbound_cli::commands::{self, CliError, RunOutput};
use qbound_cli::config::ScenarioConfig;
use qbound_cli::output;

/// Batch calculator for multiparameter estimation bounds on qubit registers.
#[derive(Parser)]
#[command(name = "qbound", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ScenarioArgs {
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Write result rows as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a structured report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum information matrices: exact, marginal-assembled, fidelity
    /// oracle, and the attainability witness.
    Qfim(ScenarioArgs),
    /// Channel-side upper bounds from local channel derivatives.
    Cq(ScenarioArgs),
    /// Classical Fisher information of a configured measurement and its
    /// measured-operator limit.
    Fim(ScenarioArgs),
    /// Saturation residuals and the identity-decomposition measurement.
    Saturate(ScenarioArgs),
    /// Information scaling across register sizes with a log-log slope fit.
    Scaling(ScenarioArgs),
    /// Fixed three-parameter rotation preset with per-particle dephasing.
    Magfield {
        /// Write result rows as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write a structured report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the internal invariant battery and print a pass/fail table.
    Check {
        /// Seed for the randomized scenario sweep.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of randomized scenarios.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

fn load_scenario(args: &ScenarioArgs) -> Result<qbound_cli::config::ResolvedScenario, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Config(anyhow::anyhow!(
            "cannot read {}: {e}",
            args.config.display()
        ))
    })?;
    let cfg = ScenarioConfig::from_json(&text).map_err(CliError::Config)?;
    qbound_cli::config::resolve(cfg).map_err(CliError::Config)
}

fn emit(out: &RunOutput, csv: Option<&PathBuf>, json: Option<&PathBuf>) -> Result<(), CliError> {
    for line in &out.lines {
        println!("{line}");
    }
    match csv {
        Some(path) => {
            output::write_csv_file(path, &out.rows)
                .map_err(|e| CliError::Contract(anyhow::anyhow!("writing CSV: {e:#}")))?;
        }
        None => {
            let mut buf: Vec<u8> = Vec::new();
            output::write_csv(&mut buf, &out.rows)
                .map_err(|e| CliError::Contract(anyhow::anyhow!("formatting CSV: {e:#}")))?;
            print!("{}", String::from_utf8_lossy(&buf));
        }
    }
    if let Some(path) = json {
        out.report
            .write_file(path)
            .map_err(|e| CliError::Contract(anyhow::anyhow!("writing JSON: {e:#}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Qfim(args) => {
            let sc = load_scenario(&args)?;
            let out = commands::run_qfim(&sc)?;
            emit(&out, args.csv.as_ref(), args.json.as_ref())
        }
        Command::Cq(args) => {
            let sc = load_scenario(&args)?;
            let out = commands::run_cq(&sc)?;
            emit(&out, args.csv.as_ref(), args.json.as_ref())
        }
        Command::Fim(args) => {
            let sc = load_scenario(&args)?;
            let out = commands::run_fim(&sc)?;
            emit(&out, args.csv.as_ref(), args.json.as_ref())
        }
        Command::Saturate(args) => {
            let sc = load_scenario(&args)?;
            let out = commands::run_saturate(&sc)?;
            emit(&out, args.csv.as_ref(), args.json.as_ref())
        }
        Command::Scaling(args) => {
            let sc = load_scenario(&args)?;
            let out = commands::run_scaling(&sc)?;
            emit(&out, args.csv.as_ref(), args.json.as_ref())
        }
        Command::Magfield { csv, json } => {
            let out = commands::run_magfield()?;
            emit(&out, csv.as_ref(), json.as_ref())
        }
        Command::Check { seed, count } => {
            let (lines, all_passed) = commands::run_check(seed, count)?;
            for line in &lines {
                println!("{line}");
            }
            if all_passed {
                Ok(())
            } else {
                Err(CliError::Contract(anyhow::anyhow!(
                    "one or more checks failed"
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
