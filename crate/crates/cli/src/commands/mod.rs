//! Experiment drivers. Each command computes a report in memory; writing it
//! out is a separate step so tests can inspect the numbers directly.

pub mod compare_tec;
pub mod control;
pub mod scenarios;
pub mod simulate;
pub mod sweep;
pub mod validate;

use spectherm::simulate::run;
use spectherm::{
    assemble, cell_volume, project_initial_state, CellSpec, CoolingConfig, ReducedModel, RunOptions, Shape,
    SimResult, ThermalMetrics,
};

use crate::config::{side_count, RunConfig};
use crate::error::{CliError, CliResult};

pub fn build_model(spec: &CellSpec, cooling: &CoolingConfig, order: usize) -> CliResult<ReducedModel> {
    let m = side_count(order).map_err(CliError::config)?;
    Ok(assemble(spec, cooling, m, m)?)
}

/// Runs a model from a uniform temperature under the constant cooling of
/// `model`, recording metrics every `stride` steps.
pub fn simulate_model(model: &ReducedModel, t_init: f64, q: &[f64], dt: f64, grid: (usize, usize), stride: usize) -> CliResult<SimResult> {
    let u = model.cooling.inputs();
    let x0 = project_initial_state(model, t_init, &u)?;
    let opts = RunOptions { grid, metrics_stride: stride, keep_states: false };
    Ok(run(model, &x0, &[u], q, dt, &opts)?)
}

pub fn require_cylindrical(cfg: &RunConfig, command: &str) -> CliResult<()> {
    match cfg.shape() {
        Shape::Cylindrical => Ok(()),
        Shape::Pouch => Err(CliError::Unsupported(format!("{command} requires a cylindrical cell"))),
    }
}

pub fn volume(cfg: &RunConfig) -> f64 {
    cell_volume(&cfg.cell)
}

/// Summary over a run of snapshot metrics: time-averaged mean temperature
/// and maxima over time of everything else.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct RunMerits {
    pub t_mean_avg: f64,
    pub t_max: f64,
    pub grad_r_max: f64,
    pub grad_z_max: f64,
    pub delta_t_max: f64,
    pub grad_r_mean_avg: f64,
    pub grad_z_mean_avg: f64,
}

impl RunMerits {
    pub fn from_metrics(ms: &[ThermalMetrics]) -> Self {
        let n = ms.len().max(1) as f64;
        let max = |f: fn(&ThermalMetrics) -> f64| ms.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        Self {
            t_mean_avg: ms.iter().map(|m| m.t_mean).sum::<f64>() / n,
            t_max: max(|m| m.t_max),
            grad_r_max: max(|m| m.grad_r_max),
            grad_z_max: max(|m| m.grad_z_max),
            delta_t_max: max(|m| m.delta_t),
            grad_r_mean_avg: ms.iter().map(|m| m.grad_r_mean).sum::<f64>() / n,
            grad_z_mean_avg: ms.iter().map(|m| m.grad_z_mean).sum::<f64>() / n,
        }
    }
}
