//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spectherm::reference::{FdConfig, FdScheme, TecModel};
use spectherm::{CellSpec, ControlSettings, CoolingConfig, Scenario, Shape};

use crate::commands::control::PlantKind;
use crate::error::{CliError, CliResult};
use crate::profile::ProfileSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default = "CellSpec::lfp_45ah")]
    pub cell: CellSpec,
    #[serde(default = "default_scenario")]
    pub scenario: Scenario,
    /// Explicit cooling; replaces `scenario` for `simulate` and `validate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooling: Option<CoolingConfig>,
    /// Scenario list for `scenarios`, `control` and the `validate` breakdown.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<Vec<Scenario>>,
    /// Model orders `O = M N` with `M = N`, so each must be a perfect square.
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_temperature")]
    pub t_init: f64,
    #[serde(default = "default_temperature")]
    pub coolant_temperature: f64,
    #[serde(default)]
    pub metrics: MetricsSettings,
    #[serde(default)]
    pub fd: FdSettings,
    #[serde(default)]
    pub tec: TecModel,
    #[serde(default)]
    pub control: ControlSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub timing: TimingSettings,
}

fn default_scenario() -> Scenario {
    Scenario::Sc
}
fn default_orders() -> Vec<usize> {
    vec![1, 4, 9, 16, 25]
}
fn default_dt() -> f64 {
    1.0
}
fn default_horizon() -> f64 {
    600.0
}
fn default_temperature() -> f64 {
    spectherm::cell::AMBIENT_C
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsSettings {
    /// Reconstruction grid `(n_xi, n_zeta)`.
    pub grid: (usize, usize),
    /// Full-field metrics every `stride` steps.
    pub stride: usize,
}

impl Default for MetricsSettings {
    fn default() -> Self {
        Self { grid: (41, 41), stride: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FdSettings {
    pub n_r: usize,
    pub n_z: usize,
    pub dt: f64,
    pub scheme: FdScheme,
}

impl Default for FdSettings {
    fn default() -> Self {
        Self { n_r: 128, n_z: 128, dt: 0.05, scheme: FdScheme::CrankNicolson }
    }
}

impl FdSettings {
    pub fn to_config(self) -> FdConfig {
        FdConfig::new(self.n_r, self.n_z, self.dt, self.scheme)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlSection {
    pub setpoint: f64,
    /// Current multiples; heat scales with the square.
    pub c_rates: Vec<f64>,
    /// Plant and estimator order.
    pub order: usize,
    pub plant: PlantKind,
    pub settings: ControlSettings,
}

impl Default for ControlSection {
    fn default() -> Self {
        Self { setpoint: 20.0, c_rates: vec![1.0, 2.0, 3.0, 4.0], order: 9, plant: PlantKind::Reduced, settings: ControlSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Height-to-outer-radius ratios `L / R_out`.
    pub ratios: Vec<f64>,
    /// Ratios of commercial cells, evaluated and flagged in the output.
    pub market_ratios: Vec<f64>,
    pub scenario: Scenario,
    pub order: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            ratios: vec![2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
            market_ratios: vec![7.22, 5.42, 6.67, 3.48],
            scenario: Scenario::BtTc,
            order: 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimingSettings {
    pub repetitions: usize,
}

impl Default for TimingSettings {
    fn default() -> Self {
        Self { repetitions: 5 }
    }
}

impl RunConfig {
    /// Defaults for every field, usable as a starting point in code.
    pub fn with_defaults() -> Self {
        serde_json::from_str(&format!("{{\"schema_version\": {SCHEMA_VERSION}}}")).expect("defaults parse")
    }

    pub fn shape(&self) -> Shape {
        self.cell.shape()
    }

    /// Cooling for single-configuration commands.
    pub fn cooling(&self) -> CoolingConfig {
        self.cooling
            .clone()
            .unwrap_or_else(|| self.scenario.cooling(self.shape(), self.coolant_temperature))
    }

    pub fn scenario_list(&self, fallback: &[Scenario]) -> Vec<Scenario> {
        self.scenarios.clone().unwrap_or_else(|| fallback.to_vec())
    }

    /// Semantic checks that serde cannot express. Errors name the offending key.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err((
                "schema_version",
                format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        self.cell.validate().map_err(|e| ("cell", e.to_string()))?;
        if let Some(c) = &self.cooling {
            c.validate_for(self.shape()).map_err(|e| ("cooling", e.to_string()))?;
        }
        if self.orders.is_empty() {
            return Err(("orders", "orders list is empty".into()));
        }
        for &o in &self.orders {
            side_count(o).map_err(|m| ("orders", m))?;
        }
        side_count(self.control.order).map_err(|m| ("order", m))?;
        side_count(self.sweep.order).map_err(|m| ("order", m))?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(("dt", format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon.is_finite() && self.horizon >= self.dt) {
            return Err(("horizon", format!("horizon must be at least dt, got {}", self.horizon)));
        }
        if self.metrics.stride == 0 || self.metrics.grid.0 < 2 || self.metrics.grid.1 < 2 {
            return Err(("metrics", "metrics need stride >= 1 and a grid of at least 2x2".into()));
        }
        self.fd.to_config().validate().map_err(|e| ("fd", e.to_string()))?;
        let ratio = self.dt / self.fd.dt;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
            return Err(("dt", format!("dt ({}) must be a multiple of fd.dt ({})", self.dt, self.fd.dt)));
        }
        self.tec.validate().map_err(|e| ("tec", e.to_string()))?;
        if self.control.c_rates.is_empty() || self.control.c_rates.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(("c_rates", "c_rates must be a non-empty list of non-negative values".into()));
        }
        if self.sweep.ratios.iter().chain(&self.sweep.market_ratios).any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(("ratios", "sweep ratios must be positive".into()));
        }
        if self.timing.repetitions < 3 {
            return Err(("repetitions", "timing needs at least 3 repetitions".into()));
        }
        self.profile.validate().map_err(|m| ("profile", m))?;
        Ok(())
    }

    /// Number of steps of size `dt` in the horizon.
    pub fn steps(&self) -> usize {
        spectherm::cell::step_count(self.dt, self.horizon)
    }
}

/// Basis functions per direction for order `o`.
pub fn side_count(o: usize) -> Result<usize, String> {
    let m = (o as f64).sqrt().round() as usize;
    if o == 0 || m * m != o {
        Err(format!("model order {o} is not a positive perfect square"))
    } else {
        Ok(m)
    }
}

/// First line of `src` that mentions `"key"`.
fn key_line(src: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    src.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// Parses and validates a configuration text. `path` only labels errors
/// and anchors relative profile paths.
pub fn parse_config(src: &str, path: Option<&Path>) -> CliResult<RunConfig> {
    let mut cfg: RunConfig = serde_json::from_str(src).map_err(|e| CliError::Config {
        path: path.map(Path::to_path_buf),
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    if let Err((key, message)) = cfg.validate() {
        return Err(CliError::Config { path: path.map(Path::to_path_buf), line: key_line(src, key), message });
    }
    if let Some(base) = path.and_then(Path::parent) {
        cfg.profile.anchor(base);
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_config(&src, Some(path))
}

/// Command-line overrides applied after loading.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub orders: Option<Vec<usize>>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> CliResult<()> {
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.orders {
            cfg.orders = o.clone();
        }
        cfg.validate().map_err(|(_, m)| CliError::config(m))
    }
}
