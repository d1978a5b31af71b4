mod commands;
mod run_report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use relkvn::generators::Family;

use crate::run_report::{CliError, RunReport};
use crate::scenario::{Overrides, Scenario};

/// Verification suites and phase-space simulations for relativistic
/// Koopman-von Neumann mechanics.
#[derive(Parser, Debug)]
#[command(name = "relkvn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (JSON); defaults apply when omitted.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for the algebraic and series checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Series truncation order.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Directory for snapshots, CSV files and the run report.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Corrupt one generator family (J, K, Lx or L) as a negative control.
    #[arg(long, global = true)]
    mutate: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poincare closure, force equation, Euler-Lagrange, momentum-representation and Poisson checks.
    VerifyAlgebra,
    /// Transport the scenario state and track its density peak.
    Evolve,
    /// Nested-commutator series against closed forms.
    SeriesCheck {
        /// c1-momentum, c1-lambda, c2, boost-velocity, boost-4vector, boost-position or canonical-map; all when omitted.
        identity: Option<String>,
        #[arg(long = "identity", conflicts_with = "identity")]
        identity_flag: Option<String>,
    },
    /// Apply the scenario boosts to a velocity-representation state.
    Boost,
    /// Integrate the point-particle force equation.
    Trajectory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let mutate = cli
        .mutate
        .as_deref()
        .map(|m| m.parse::<Family>().map_err(|e| CliError::Config(e.to_string())))
        .transpose()?;
    let identity = match &cli.command {
        Command::SeriesCheck { identity, identity_flag } => identity.clone().or_else(|| identity_flag.clone()),
        _ => None,
    };
    let overrides = Overrides { seed: cli.seed, tol: cli.tol, order: cli.order, out: cli.out.clone(), mutate, identity };
    let scenario = Scenario::load(cli.scenario.as_deref(), &overrides)?;
    let started = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::VerifyAlgebra => ("verify-algebra", commands::verify_algebra(&scenario)?),
        Command::Evolve => ("evolve", commands::evolve(&scenario)?),
        Command::SeriesCheck { .. } => ("series-check", commands::series_check(&scenario)?),
        Command::Boost => ("boost", commands::boost(&scenario)?),
        Command::Trajectory => ("trajectory", commands::trajectory(&scenario)?),
    };
    let mut artifacts = outcome.artifacts;
    let report_path = scenario.output.dir.as_ref().map(|d| d.join("run_report.json"));
    if let Some(path) = &report_path {
        artifacts.push(path.clone());
    }
    let report = RunReport::new(name, scenario, outcome.reports, artifacts, started.elapsed().as_secs_f64());
    if let Some(path) = report_path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Runtime(e.to_string()))?;
        std::fs::write(path, text)?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{report}"),
                Format::Machine => println!("{}", serde_json::to_string(&report).expect("reports serialize")),
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("relkvn: {e}"),
                Format::Machine => println!("{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() })),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
