//! Reduced models and the two-state equivalent circuit against the
//! finite-difference oracle, plus a wall-time table.

use rayon::prelude::*;
use serde::Serialize;
use spectherm::reference::{
    fd_solve, tec_metrics, tec_run, timing_harness, FdRunOptions, TimedModel, TimingRow,
};

use super::{build_model, require_cylindrical, simulate_model, volume};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, OutputDir, Table};

/// Indicator traces on the recorded time grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IndicatorTrace {
    pub label: String,
    pub t_mean: Vec<f64>,
    pub t_max: Vec<f64>,
    pub grad_r_max: Vec<f64>,
}

impl IndicatorTrace {
    fn push(&mut self, t_mean: f64, t_max: f64, grad_r: f64) {
        self.t_mean.push(t_mean);
        self.t_max.push(t_max);
        self.grad_r_max.push(grad_r);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorErrors {
    pub t_mean: f64,
    pub t_max: f64,
    pub grad_r_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub label: String,
    /// Max over time of the absolute indicator error.
    pub errors: IndicatorErrors,
    /// Gradient error at each local maximum of the oracle gradient trace.
    pub peak_grad_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub traces: Vec<IndicatorTrace>,
    pub comparisons: Vec<ModelComparison>,
    #[serde(skip)]
    pub timing: Vec<TimingRow>,
}

impl CompareReport {
    pub fn comparison(&self, label: &str) -> Option<&ModelComparison> {
        self.comparisons.iter().find(|c| c.label == label)
    }
}

pub fn order_label(o: usize) -> String {
    format!("O{o}")
}

fn local_maxima(v: &[f64]) -> Vec<usize> {
    (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).collect()
}

fn compare(reference: &IndicatorTrace, model: &IndicatorTrace, peaks: &[usize]) -> ModelComparison {
    let err = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    ModelComparison {
        label: model.label.clone(),
        errors: IndicatorErrors {
            t_mean: err(&model.t_mean, &reference.t_mean),
            t_max: err(&model.t_max, &reference.t_max),
            grad_r_max: err(&model.grad_r_max, &reference.grad_r_max),
        },
        peak_grad_errors: peaks.iter().map(|&i| (model.grad_r_max[i] - reference.grad_r_max[i]).abs()).collect(),
    }
}

/// `with_timing = false` skips the wall-time table.
pub fn run_compare_tec(cfg: &RunConfig, with_timing: bool) -> CliResult<CompareReport> {
    require_cylindrical(cfg, "compare-tec")?;
    let cooling = cfg.cooling();
    let vol = volume(cfg);
    let fd_cfg = cfg.fd.to_config();
    let ratio = (cfg.dt / fd_cfg.dt).round() as usize;
    let stride = cfg.metrics.stride;
    let q = cfg.profile.samples(cfg.seed, vol, cfg.dt, cfg.horizon)?;
    let q_fd = cfg.profile.samples(cfg.seed, vol, fd_cfg.dt, cfg.horizon)?;

    let oracle = || -> CliResult<IndicatorTrace> {
        let opts = FdRunOptions { metrics_stride: ratio * stride };
        let tr = fd_solve(&cfg.cell, &cooling, cfg.t_init, &[cooling.inputs()], &q_fd, fd_cfg, opts)?;
        let mut out = IndicatorTrace { label: "FD".into(), ..Default::default() };
        for m in &tr.metrics {
            out.push(m.t_mean, m.t_max, m.grad_r_max);
        }
        Ok(out)
    };
    let reduced = || -> CliResult<Vec<(IndicatorTrace, Vec<f64>)>> {
        cfg.orders
            .par_iter()
            .map(|&o| {
                let model = build_model(&cfg.cell, &cooling, o)?;
                let res = simulate_model(&model, cfg.t_init, &q, cfg.dt, cfg.metrics.grid, stride)?;
                let mut out = IndicatorTrace { label: order_label(o), ..Default::default() };
                for m in &res.metrics {
                    out.push(m.t_mean, m.t_max, m.grad_r_max);
                }
                let times = res.metric_steps.iter().map(|k| *k as f64 * cfg.dt).collect();
                Ok((out, times))
            })
            .collect()
    };
    let (fd, csg) = rayon::join(oracle, reduced);
    let (fd, csg) = (fd?, csg?);
    let times = csg.first().map(|c| c.1.clone()).unwrap_or_default();

    let mut tec = cfg.tec;
    tec.t_inf = cooling.surface.t_inf;
    let q_watts: Vec<f64> = q.iter().map(|v| v * vol).collect();
    let states = tec_run(&tec, cfg.t_init, &q_watts, cfg.dt)?;
    let mut tec_trace = IndicatorTrace { label: "TEC".into(), ..Default::default() };
    for t in &times {
        let (tc, ts) = states[(t / cfg.dt).round() as usize];
        let (mean, grad) = tec_metrics(tc, ts, &cfg.cell)?;
        tec_trace.push(mean, tc.max(ts), grad.abs());
    }

    let peaks = local_maxima(&fd.grad_r_max);
    let mut traces = vec![tec_trace];
    traces.extend(csg.into_iter().map(|c| c.0));
    let comparisons = traces.iter().map(|t| compare(&fd, t, &peaks)).collect();
    traces.insert(0, fd);

    let timing = if with_timing {
        let mut entries = vec![TimedModel::Tec { label: "TEC".into(), model: tec, volume: vol }];
        for &o in &cfg.orders {
            entries.push(TimedModel::Reduced { label: order_label(o), model: build_model(&cfg.cell, &cooling, o)? });
        }
        timing_harness(&entries, &q, cfg.dt, cfg.timing.repetitions)?
    } else {
        Vec::new()
    };
    Ok(CompareReport { times, traces, comparisons, timing })
}

/// Relative wall-time change of `label` against the circuit, percent.
pub fn time_change_vs_tec(timing: &[TimingRow], label: &str) -> Option<f64> {
    let tec = timing.iter().find(|r| r.label == "TEC")?;
    let row = timing.iter().find(|r| r.label == label)?;
    Some(100.0 * (row.mean_ms - tec.mean_ms) / tec.mean_ms)
}

pub fn timing_table(timing: &[TimingRow]) -> Table {
    let mut t = Table::new(&["model", "states", "mean_ms", "min_ms"]);
    for r in timing {
        t.push(vec![r.label.clone(), r.states.to_string(), format!("{:.4}", r.mean_ms), format!("{:.4}", r.min_ms)]);
    }
    t
}

pub fn write_compare_tec(report: &CompareReport, cfg: &RunConfig, out: &OutputDir) -> CliResult<()> {
    for tr in &report.traces {
        let mut t = Table::new(&["t_s", "T_mean_C", "T_max_C", "dTr_max_Kpm"]);
        for (k, time) in report.times.iter().enumerate() {
            t.push_numbers(&[*time, tr.t_mean[k], tr.t_max[k], tr.grad_r_max[k]]);
        }
        out.write_table(&format!("trace_{}", tr.label), &t)?;
    }
    let mut e = Table::new(&["model", "err_T_mean_K", "err_T_max_K", "err_dTr_max_Kpm", "peak_count"]);
    for c in &report.comparisons {
        e.push(vec![
            c.label.clone(),
            num(c.errors.t_mean),
            num(c.errors.t_max),
            num(c.errors.grad_r_max),
            c.peak_grad_errors.len().to_string(),
        ]);
    }
    out.write_table("errors", &e)?;
    // Wall times vary between runs; they stay out of the summary.
    if !report.timing.is_empty() {
        out.write_table("timing", &timing_table(&report.timing))?;
    }
    out.write_summary("compare-tec", cfg, report)
}
