//! Aspect-ratio sweep of a cylindrical cell at constant volume.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use spectherm::{cell_volume, CellSpec, Geometry};

use super::{build_model, require_cylindrical, simulate_model, RunMerits};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, OutputDir, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub ratio: f64,
    pub length: f64,
    pub r_out: f64,
    pub volume: f64,
    pub market: bool,
    pub merits: RunMerits,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub scenario: String,
    pub base_volume: f64,
    pub points: Vec<SweepPoint>,
    /// Ratios that could not be realized with the fixed inner radius.
    pub skipped: Vec<f64>,
}

impl SweepReport {
    /// Points at the requested (non-market) ratios, in ratio order.
    pub fn sweep_points(&self) -> Vec<&SweepPoint> {
        self.points.iter().filter(|p| !p.market).collect()
    }
}

/// Outer radius giving `volume = pi (R^2 - r_in^2) ratio R` for a fixed
/// inner radius, found by bisection (the left side increases with `R`).
pub fn radius_for_ratio(ratio: f64, r_in: f64, volume: f64) -> f64 {
    let f = |r: f64| PI * ratio * r * (r * r - r_in * r_in) - volume;
    let mut lo = r_in;
    let mut hi = r_in.max(1e-3) * 2.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Cell with the same volume, properties and inner radius as `base` and
/// height-to-outer-radius ratio `ratio`.
pub fn resize_cell(base: &CellSpec, ratio: f64) -> CliResult<CellSpec> {
    let Geometry::Cylindrical { r_in, .. } = base.geometry else {
        return Err(CliError::Unsupported("geometry sweep requires a cylindrical cell".into()));
    };
    let r_out = radius_for_ratio(ratio, r_in, cell_volume(base));
    let spec = CellSpec { geometry: Geometry::Cylindrical { r_out, r_in }, length: ratio * r_out, ..*base };
    spec.validate()?;
    Ok(spec)
}

pub fn run_sweep(cfg: &RunConfig) -> CliResult<SweepReport> {
    require_cylindrical(cfg, "sweep-geometry")?;
    let sec = &cfg.sweep;
    let base_volume = cell_volume(&cfg.cell);
    let mut ratios: Vec<(f64, bool)> = sec.ratios.iter().map(|r| (*r, false)).collect();
    ratios.extend(sec.market_ratios.iter().map(|r| (*r, true)));
    ratios.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let cooling = sec.scenario.cooling(cfg.shape(), cfg.coolant_temperature);
    let results: Vec<CliResult<Option<SweepPoint>>> = ratios
        .par_iter()
        .map(|&(ratio, market)| {
            let spec = match resize_cell(&cfg.cell, ratio) {
                Ok(s) => s,
                Err(CliError::Config { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let q = cfg.profile.samples(cfg.seed, cell_volume(&spec), cfg.dt, cfg.horizon)?;
            let model = build_model(&spec, &cooling, sec.order)?;
            let res = simulate_model(&model, cfg.t_init, &q, cfg.dt, cfg.metrics.grid, cfg.metrics.stride)?;
            let Geometry::Cylindrical { r_out, .. } = spec.geometry else { unreachable!() };
            Ok(Some(SweepPoint {
                ratio,
                length: spec.length,
                r_out,
                volume: cell_volume(&spec),
                market,
                merits: RunMerits::from_metrics(&res.metrics),
            }))
        })
        .collect();
    let mut report = SweepReport { scenario: sec.scenario.name().into(), base_volume, points: Vec::new(), skipped: Vec::new() };
    for (r, &(ratio, _)) in results.into_iter().zip(&ratios) {
        match r? {
            Some(p) => report.points.push(p),
            None => {
                log::warn!("skipping ratio {ratio}: outer radius would not exceed the inner radius");
                report.skipped.push(ratio);
            }
        }
    }
    Ok(report)
}

pub fn write_sweep(report: &SweepReport, cfg: &RunConfig, out: &OutputDir) -> CliResult<()> {
    let mut t = Table::new(&[
        "ratio", "L_m", "R_out_m", "volume_m3", "T_mean_C", "dTr_max_Kpm", "dTz_max_Kpm", "market_cell",
    ]);
    for p in &report.points {
        let m = &p.merits;
        let mut row: Vec<String> =
            [p.ratio, p.length, p.r_out, p.volume, m.t_mean_avg, m.grad_r_max, m.grad_z_max].map(num).to_vec();
        row.push(if p.market { "1".into() } else { "0".into() });
        t.push(row);
    }
    out.write_table("sweep", &t)?;
    out.write_summary("sweep-geometry", cfg, report)
}
