use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rydgate_cli::config::{Format, RunConfig};
use rydgate_cli::{render, run, CliError, Command};

#[derive(Parser)]
#[command(name = "rydgate", version, about = "Error budgets and pulse simulation for Rydberg C_kNOT gates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Itemized error budget per case and k
    Budget(Common),
    /// Error as a function of the Rabi frequency
    SweepOmega(Common),
    /// State-vector simulation of the pulse sequence
    Simulate(Common),
    /// Lattice layout export
    Lattice(Common),
    /// Numeric optimum against the analytic estimate
    Optimize(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Accepted for scripting; no run uses a random number generator
    #[arg(long)]
    seedless: bool,
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (command, args) = match cli.command {
        Cmd::Budget(a) => (Command::Budget, a),
        Cmd::SweepOmega(a) => (Command::SweepOmega, a),
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Lattice(a) => (Command::Lattice, a),
        Cmd::Optimize(a) => (Command::Optimize, a),
    };
    let _ = args.seedless;
    let text = fs::read_to_string(&args.config)?;
    let output = RunConfig::from_json(&text)?.output.unwrap_or_default();
    let report = run(command, &text)?;
    let format = args.format.or(output.format).unwrap_or(Format::Json);
    let rendered = render(&report, format)?;
    match args.out.or(output.path) {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    let check_ok = report
        .simulation
        .as_ref()
        .and_then(|s| s.ideal_check.as_ref())
        .is_none_or(|c| c.passed);
    Ok(check_ok)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: ideal-limit truth-table check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
