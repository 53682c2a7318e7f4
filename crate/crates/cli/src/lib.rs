//! Config-driven front end over `rydgate_core`: budgets, optimization,
//! frequency sweeps, lattice layouts and pulse simulation.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use config::{Format, RunConfig, SchemeName};
pub use error::CliError;
pub use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Budget,
    SweepOmega,
    Simulate,
    Lattice,
    Optimize,
}

/// Parses, validates and runs one command.
pub fn run(command: Command, config_text: &str) -> Result<Report, CliError> {
    let cfg = RunConfig::from_json(config_text)?;
    let v = cfg.validate()?;
    if command == Command::Simulate && cfg.scheme != SchemeName::Simulate {
        return Err(CliError::Field { field: "scheme".into(), message: "simulate needs scheme \"simulate\"".into() });
    }
    match command {
        Command::Budget => commands::budget(&v),
        Command::SweepOmega => commands::sweep_omega(&v),
        Command::Simulate => commands::simulate(&v),
        Command::Lattice => commands::lattice(&v),
        Command::Optimize => commands::optimize(&v),
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv(),
    }
}
