//! Output error of each model order against the finite-difference oracle.

use rayon::prelude::*;
use serde::Serialize;
use spectherm::reference::{fd_solve, FdRunOptions};
use spectherm::CoolingConfig;

use super::{build_model, simulate_model, volume};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, OutputDir, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderError {
    pub scenario: String,
    pub order: usize,
    /// Max over time of |CSG - FD| at surface, core, top and bottom, K.
    pub per_output: [f64; 4],
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub rows: Vec<OrderError>,
}

impl ValidateReport {
    pub fn errors_for(&self, scenario: &str) -> Vec<(usize, f64)> {
        self.rows.iter().filter(|r| r.scenario == scenario).map(|r| (r.order, r.max)).collect()
    }

    /// Errors do not grow with the order, per scenario.
    pub fn non_increasing(&self, scenario: &str) -> bool {
        self.errors_for(scenario).windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

fn coolings(cfg: &RunConfig) -> Vec<CoolingConfig> {
    match (&cfg.cooling, &cfg.scenarios) {
        (Some(c), _) => vec![c.clone()],
        (None, Some(list)) => list.iter().map(|s| s.cooling(cfg.shape(), cfg.coolant_temperature)).collect(),
        (None, None) => vec![cfg.cooling()],
    }
}

fn validate_one(cfg: &RunConfig, cooling: &CoolingConfig) -> CliResult<Vec<OrderError>> {
    let fd_cfg = cfg.fd.to_config();
    let stride = (cfg.dt / fd_cfg.dt).round() as usize;
    let q_fd = cfg.profile.samples(cfg.seed, volume(cfg), fd_cfg.dt, cfg.horizon)?;
    let q = cfg.profile.samples(cfg.seed, volume(cfg), cfg.dt, cfg.horizon)?;
    let oracle = || -> CliResult<_> {
        Ok(fd_solve(&cfg.cell, cooling, cfg.t_init, &[cooling.inputs()], &q_fd, fd_cfg, FdRunOptions { metrics_stride: 0 })?)
    };
    let models = || -> CliResult<Vec<_>> {
        cfg.orders
            .par_iter()
            .map(|&o| {
                let model = build_model(&cfg.cell, cooling, o)?;
                let res = simulate_model(&model, cfg.t_init, &q, cfg.dt, cfg.metrics.grid, 0)?;
                Ok((o, res.outputs))
            })
            .collect()
    };
    let (fd, csg) = rayon::join(oracle, models);
    let (fd, csg) = (fd?, csg?);
    Ok(csg
        .into_iter()
        .map(|(order, outputs)| {
            let mut per_output = [0.0f64; 4];
            for (k, y) in outputs.iter().enumerate() {
                let yf = fd.outputs[(k * stride).min(fd.outputs.len() - 1)];
                for i in 0..4 {
                    per_output[i] = per_output[i].max((y[i] - yf[i]).abs());
                }
            }
            let max = per_output.iter().cloned().fold(0.0, f64::max);
            OrderError { scenario: cooling.name.clone(), order, per_output, max }
        })
        .collect())
}

pub fn run_validate(cfg: &RunConfig) -> CliResult<ValidateReport> {
    let per: Vec<Vec<OrderError>> =
        coolings(cfg).par_iter().map(|c| validate_one(cfg, c)).collect::<CliResult<_>>()?;
    Ok(ValidateReport { rows: per.into_iter().flatten().collect() })
}

pub fn write_validate(report: &ValidateReport, cfg: &RunConfig, out: &OutputDir) -> CliResult<()> {
    let mut t = Table::new(&["scenario", "order", "err_surface_K", "err_core_K", "err_top_K", "err_bottom_K", "err_max_K"]);
    for r in &report.rows {
        let mut row = vec![r.scenario.clone(), r.order.to_string()];
        row.extend(r.per_output.iter().map(|v| num(*v)));
        row.push(num(r.max));
        t.push(row);
    }
    out.write_table("errors", &t)?;
    out.write_summary("validate", cfg, report)
}
