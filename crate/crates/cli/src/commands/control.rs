//! Closed-loop mean-temperature regulation across scenarios and C-rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spectherm::control::{closed_loop_run, ControlTrace, EstimatorState, FdPlant, Plant, ReducedPlant};
use spectherm::reference::FdSolver;
use spectherm::{Scenario, Shape, Side};

use super::{build_model, volume};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, OutputDir, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlantKind {
    #[default]
    Reduced,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlRun {
    pub scenario: String,
    pub c_rate: f64,
    /// Time averages of the volume-mean gradient magnitudes, K/m.
    pub grad_r_mean: f64,
    pub grad_z_mean: f64,
    /// Largest |T_mean - setpoint| over the final 20% of the run, K.
    pub tail_error: f64,
    #[serde(skip)]
    pub trace: ControlTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlReport {
    pub setpoint: f64,
    pub runs: Vec<ControlRun>,
}

impl ControlReport {
    pub fn run(&self, s: Scenario, c_rate: f64) -> Option<&ControlRun> {
        self.runs.iter().find(|r| r.scenario == s.name() && r.c_rate == c_rate)
    }
}

fn control_one(cfg: &RunConfig, scenario: Scenario, c_rate: f64, base_q: &[f64]) -> CliResult<ControlRun> {
    let sec = &cfg.control;
    let cooling = scenario.cooling(cfg.shape(), sec.settings.baseline);
    let model = build_model(&cfg.cell, &cooling, sec.order)?;
    let u0 = cooling.inputs();
    let mut est = EstimatorState::new(model.clone(), cfg.t_init, &u0, cfg.dt)?;
    let mut plant: Box<dyn Plant> = match sec.plant {
        PlantKind::Reduced => Box::new(ReducedPlant::new(model, cfg.t_init, &u0, cfg.dt)?),
        PlantKind::FiniteDifference => {
            let mut fd = cfg.fd.to_config();
            fd.dt = cfg.dt;
            Box::new(FdPlant::new(FdSolver::new(&cfg.cell, &cooling, fd)?, cfg.t_init))
        }
    };
    // Joule heating grows with the square of the current.
    let q: Vec<f64> = base_q.iter().map(|v| v * c_rate * c_rate).collect();
    let trace = closed_loop_run(plant.as_mut(), &mut est, scenario, sec.setpoint, &q, cfg.dt, &sec.settings)?;
    let n = trace.metrics.len() as f64;
    let tail_start = (0.8 * trace.metrics.len() as f64).floor() as usize;
    Ok(ControlRun {
        scenario: scenario.name().to_string(),
        c_rate,
        grad_r_mean: trace.metrics.iter().map(|m| m.grad_r_mean).sum::<f64>() / n,
        grad_z_mean: trace.metrics.iter().map(|m| m.grad_z_mean).sum::<f64>() / n,
        tail_error: trace.metrics[tail_start..]
            .iter()
            .map(|m| (m.t_mean - sec.setpoint).abs())
            .fold(0.0, f64::max),
        trace,
    })
}

pub fn run_control(cfg: &RunConfig) -> CliResult<ControlReport> {
    let base_q = cfg.profile.samples(cfg.seed, volume(cfg), cfg.dt, cfg.horizon)?;
    let jobs: Vec<(Scenario, f64)> = cfg
        .scenario_list(&Scenario::ALL)
        .into_iter()
        .flat_map(|s| cfg.control.c_rates.iter().map(move |c| (s, *c)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|(s, c)| control_one(cfg, *s, *c, &base_q))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ControlReport { setpoint: cfg.control.setpoint, runs })
}

/// Coolant temperature implied by a boundary input on one side.
fn coolant_temperature(value: f64, side: Side, h: f64, fallback: f64) -> f64 {
    if h == 0.0 {
        fallback
    } else {
        value / (side.sign() * h)
    }
}

pub fn write_control(report: &ControlReport, cfg: &RunConfig, out: &OutputDir) -> CliResult<()> {
    let pouch = cfg.shape() == Shape::Pouch;
    let mut sides = vec![Side::Surface, Side::Top, Side::Bottom];
    let mut header = vec!["t_s", "T_mean_C", "T_mean_est_C", "u_s_C", "u_t_C", "u_b_C"];
    if pouch {
        sides.push(Side::Core);
        header.push("u_c_C");
    }
    header.extend(["dTr_mean_Kpm", "dTz_mean_Kpm"]);
    let baseline = cfg.control.settings.baseline;
    for r in &report.runs {
        let scenario = Scenario::from_name(&r.scenario).expect("known scenario");
        let cooling = scenario.cooling(cfg.shape(), baseline);
        let tr = &r.trace;
        let mut t = Table::new(&header);
        for k in 0..tr.times.len() {
            let m = &tr.metrics[k];
            let mut row = vec![tr.times[k], m.t_mean, tr.t_mean_est[k]];
            for s in &sides {
                row.push(coolant_temperature(tr.inputs[k].get(*s), *s, cooling.h(*s), baseline));
            }
            row.extend([m.grad_r_mean, m.grad_z_mean]);
            t.push_numbers(&row);
        }
        out.write_table(&format!("trace_{}_c{}", r.scenario, r.c_rate), &t)?;
    }
    let mut s = Table::new(&["scenario", "c_rate", "dTr_mean_Kpm", "dTz_mean_Kpm", "tail_err_K"]);
    for r in &report.runs {
        s.push(vec![r.scenario.clone(), num(r.c_rate), num(r.grad_r_mean), num(r.grad_z_mean), num(r.tail_error)]);
    }
    out.write_table("gradients", &s)?;
    out.write_summary("control", cfg, report)
}
