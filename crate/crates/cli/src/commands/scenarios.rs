//! Thermal merits of the five cooling scenarios on one heat profile.

use rayon::prelude::*;
use serde::Serialize;
use spectherm::{Scenario, ThermalMetrics};

use super::{build_model, require_cylindrical, simulate_model, volume, RunMerits};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{OutputDir, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub merits: RunMerits,
    #[serde(skip)]
    pub times: Vec<f64>,
    #[serde(skip)]
    pub metrics: Vec<ThermalMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub order: usize,
    pub results: Vec<ScenarioResult>,
}

impl ScenarioReport {
    pub fn merits(&self, s: Scenario) -> Option<&RunMerits> {
        self.results.iter().find(|r| r.scenario == s.name()).map(|r| &r.merits)
    }

    /// Scenario with the smallest value of `f`.
    pub fn argmin(&self, f: impl Fn(&RunMerits) -> f64) -> Option<&str> {
        self.results
            .iter()
            .min_by(|a, b| f(&a.merits).total_cmp(&f(&b.merits)))
            .map(|r| r.scenario.as_str())
    }

    pub fn argmax(&self, f: impl Fn(&RunMerits) -> f64) -> Option<&str> {
        self.results
            .iter()
            .max_by(|a, b| f(&a.merits).total_cmp(&f(&b.merits)))
            .map(|r| r.scenario.as_str())
    }
}

/// Runs every listed scenario at the largest configured order.
pub fn run_scenarios(cfg: &RunConfig) -> CliResult<ScenarioReport> {
    require_cylindrical(cfg, "scenarios")?;
    let order = *cfg.orders.iter().max().expect("validated non-empty");
    let q = cfg.profile.samples(cfg.seed, volume(cfg), cfg.dt, cfg.horizon)?;
    let results = cfg
        .scenario_list(&Scenario::ALL)
        .par_iter()
        .map(|s| {
            let cooling = s.cooling(cfg.shape(), cfg.coolant_temperature);
            let model = build_model(&cfg.cell, &cooling, order)?;
            let res = simulate_model(&model, cfg.t_init, &q, cfg.dt, cfg.metrics.grid, cfg.metrics.stride)?;
            Ok(ScenarioResult {
                scenario: s.name().to_string(),
                merits: RunMerits::from_metrics(&res.metrics),
                times: res.metric_steps.iter().map(|k| *k as f64 * cfg.dt).collect(),
                metrics: res.metrics,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ScenarioReport { order, results })
}

pub fn write_scenarios(report: &ScenarioReport, cfg: &RunConfig, out: &OutputDir) -> CliResult<()> {
    let mut table = Table::new(&["scenario", "T_mean_C", "T_max_C", "dTr_max_Kpm", "dTz_max_Kpm", "dT_K"]);
    for r in &report.results {
        let m = &r.merits;
        let mut row = vec![r.scenario.clone()];
        row.extend([m.t_mean_avg, m.t_max, m.grad_r_max, m.grad_z_max, m.delta_t_max].map(crate::output::num));
        table.push(row);
        let mut t = Table::new(&["t_s", "T_mean_C", "T_max_C", "dTr_max_Kpm", "dTz_max_Kpm", "dT_K"]);
        for (time, m) in r.times.iter().zip(&r.metrics) {
            t.push_numbers(&[*time, m.t_mean, m.t_max, m.grad_r_max, m.grad_z_max, m.delta_t]);
        }
        out.write_table(&format!("trace_{}", r.scenario), &t)?;
    }
    out.write_table("merits", &table)?;
    out.write_summary("scenarios", cfg, report)
}
