//! Batch experiments on spectral-Galerkin battery thermal models: order
//! convergence, equivalent-circuit comparison, cooling scenarios, closed-loop
//! control and geometry sweeps. Results are written as CSV plus a JSON summary.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod profile;

use std::path::PathBuf;

pub use config::{load_config, parse_config, Overrides, RunConfig};
pub use error::{CliError, CliResult};
pub use ingest::{ingest_drive_cycle, write_drive_cycle};
pub use profile::ProfileSpec;

use commands::{compare_tec, control, scenarios, simulate, sweep, validate};
use output::OutputDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    CompareTec,
    Scenarios,
    Control,
    SweepGeometry,
    Simulate,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Validate,
        Command::CompareTec,
        Command::Scenarios,
        Command::Control,
        Command::SweepGeometry,
        Command::Simulate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::CompareTec => "compare-tec",
            Command::Scenarios => "scenarios",
            Command::Control => "control",
            Command::SweepGeometry => "sweep-geometry",
            Command::Simulate => "simulate",
        }
    }
}

/// Output root: the configured directory or `results`.
pub fn output_root(cfg: &RunConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("results"))
}

/// Runs one command and writes its files under `<out>/<command>/`.
pub fn execute(command: Command, cfg: &RunConfig) -> CliResult<PathBuf> {
    let out = OutputDir::create(&output_root(cfg), command.name())?;
    log::info!("{} -> {}", command.name(), out.path().display());
    match command {
        Command::Validate => validate::write_validate(&validate::run_validate(cfg)?, cfg, &out)?,
        Command::CompareTec => compare_tec::write_compare_tec(&compare_tec::run_compare_tec(cfg, true)?, cfg, &out)?,
        Command::Scenarios => scenarios::write_scenarios(&scenarios::run_scenarios(cfg)?, cfg, &out)?,
        Command::Control => control::write_control(&control::run_control(cfg)?, cfg, &out)?,
        Command::SweepGeometry => sweep::write_sweep(&sweep::run_sweep(cfg)?, cfg, &out)?,
        Command::Simulate => simulate::write_simulate(&simulate::run_simulate(cfg)?, cfg, &out)?,
    }
    log::info!("{} done", command.name());
    Ok(out.path().to_path_buf())
}
