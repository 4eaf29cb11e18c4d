//! Plain forward runs of each configured order.

use rayon::prelude::*;
use serde::Serialize;
use spectherm::SimResult;

use super::{build_model, simulate_model, volume, RunMerits};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{OutputDir, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateRun {
    pub order: usize,
    pub merits: RunMerits,
    pub final_outputs: [f64; 4],
    #[serde(skip)]
    pub result: SimResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub cooling: String,
    pub runs: Vec<SimulateRun>,
}

pub fn run_simulate(cfg: &RunConfig) -> CliResult<SimulateReport> {
    let cooling = cfg.cooling();
    let q = cfg.profile.samples(cfg.seed, volume(cfg), cfg.dt, cfg.horizon)?;
    let runs = cfg
        .orders
        .par_iter()
        .map(|&o| {
            let model = build_model(&cfg.cell, &cooling, o)?;
            let result = simulate_model(&model, cfg.t_init, &q, cfg.dt, cfg.metrics.grid, cfg.metrics.stride)?;
            Ok(SimulateRun {
                order: o,
                merits: RunMerits::from_metrics(&result.metrics),
                final_outputs: *result.outputs.last().expect("at least one step"),
                result,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SimulateReport { cooling: cooling.name, runs })
}

pub fn write_simulate(report: &SimulateReport, cfg: &RunConfig, out: &OutputDir) -> CliResult<()> {
    for r in &report.runs {
        let res = &r.result;
        let mut t = Table::new(&[
            "t_s", "T_surface_C", "T_core_C", "T_top_C", "T_bottom_C", "T_mean_C", "T_max_C", "T_min_C",
            "dTr_max_Kpm", "dTz_max_Kpm", "dTr_mean_Kpm", "dTz_mean_Kpm",
        ]);
        for (k, m) in res.metric_steps.iter().zip(&res.metrics) {
            let y = res.outputs[*k];
            t.push_numbers(&[
                res.times[*k], y[0], y[1], y[2], y[3], m.t_mean, m.t_max, m.t_min, m.grad_r_max, m.grad_z_max,
                m.grad_r_mean, m.grad_z_mean,
            ]);
        }
        out.write_table(&format!("O{}", r.order), &t)?;
    }
    out.write_summary("simulate", cfg, report)
}
