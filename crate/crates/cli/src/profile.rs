//! Heat-generation inputs: synthetic profiles and drive-cycle files.
//!
//! The pulse and random-drive defaults are illustrative values chosen for the
//! 45 Ah cell, not measured cycles.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spectherm::{resample_profile, HeatProfile};

use crate::error::CliResult;
use crate::ingest::ingest_drive_cycle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    /// Constant volumetric heat, W/m^3.
    ConstantQ { q: f64 },
    /// `amplitude` during the first `duty * period` seconds of every period,
    /// `base` otherwise.
    PulseTrain {
        amplitude: f64,
        period: f64,
        duty: f64,
        #[serde(default)]
        base: f64,
    },
    /// Seeded band-limited random current through an ohmic overpotential.
    ScaledRandomDrive {
        #[serde(default = "default_rms_current")]
        rms_current: f64,
        #[serde(default = "default_resistance")]
        resistance: f64,
        /// Correlation time of the current, s.
        #[serde(default = "default_time_constant")]
        time_constant: f64,
        /// Multiplier on the current.
        #[serde(default = "default_scale")]
        scale: f64,
        #[serde(default = "default_ocv")]
        ocv: f64,
    },
    /// Drive-cycle CSV, relative paths resolve against the config file.
    File { path: PathBuf },
}

fn default_rms_current() -> f64 {
    45.0
}
fn default_resistance() -> f64 {
    5e-3
}
fn default_time_constant() -> f64 {
    20.0
}
fn default_scale() -> f64 {
    2.0
}
fn default_ocv() -> f64 {
    3.3
}

impl Default for ProfileSpec {
    fn default() -> Self {
        ProfileSpec::ConstantQ { q: 1e5 }
    }
}

impl ProfileSpec {
    pub fn validate(&self) -> Result<(), String> {
        let finite = |v: f64| v.is_finite();
        match *self {
            ProfileSpec::ConstantQ { q } if !finite(q) => Err("profile q must be finite".into()),
            ProfileSpec::PulseTrain { amplitude, period, duty, base } => {
                if !(finite(amplitude) && finite(base) && period > 0.0 && period.is_finite()) {
                    Err("pulse train needs finite levels and a positive period".into())
                } else if !(0.0..=1.0).contains(&duty) {
                    Err(format!("pulse duty must lie in [0, 1], got {duty}"))
                } else {
                    Ok(())
                }
            }
            ProfileSpec::ScaledRandomDrive { rms_current, resistance, time_constant, scale, ocv } => {
                if [rms_current, resistance, scale, ocv].iter().all(|v| finite(*v))
                    && time_constant > 0.0
                    && time_constant.is_finite()
                {
                    Ok(())
                } else {
                    Err("random drive parameters must be finite with a positive time constant".into())
                }
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn anchor(&mut self, base: &Path) {
        if let ProfileSpec::File { path } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }

    /// Heat samples `q(k dt)`, `k = 0..=horizon/dt`, in W/m^3.
    pub fn samples(&self, seed: u64, cell_volume: f64, dt: f64, horizon: f64) -> CliResult<Vec<f64>> {
        let n = spectherm::cell::step_count(dt, horizon);
        match self {
            ProfileSpec::ConstantQ { q } => Ok(vec![*q; n + 1]),
            ProfileSpec::PulseTrain { amplitude, period, duty, base } => Ok((0..=n)
                .map(|k| {
                    let phase = (k as f64 * dt).rem_euclid(*period);
                    if phase < duty * period - 1e-9 {
                        *amplitude
                    } else {
                        *base
                    }
                })
                .collect()),
            ProfileSpec::ScaledRandomDrive { .. } => {
                let p = self.random_drive(seed, horizon)?.to_volumetric(cell_volume)?;
                Ok(resample_profile(&p, dt, horizon)?)
            }
            ProfileSpec::File { path } => {
                let p = ingest_drive_cycle(path)?.to_volumetric(cell_volume)?;
                Ok(resample_profile(&p, dt, horizon)?)
            }
        }
    }

    /// Electrical profile sampled every second: an AR(1) current with unit
    /// variance and correlation time `time_constant`, scaled to the RMS
    /// current, with terminal voltage `ocv + I R`.
    fn random_drive(&self, seed: u64, horizon: f64) -> CliResult<HeatProfile> {
        let ProfileSpec::ScaledRandomDrive { rms_current, resistance, time_constant, scale, ocv } = *self else {
            unreachable!("random_drive called on another profile kind");
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = (-1.0 / time_constant).exp();
        let b = (1.0 - a * a).sqrt();
        let half_width = 3f64.sqrt();
        let n = horizon.ceil() as usize + 1;
        let mut x = rng.random_range(-half_width..half_width);
        let mut times = Vec::with_capacity(n);
        let mut current = Vec::with_capacity(n);
        for k in 0..n {
            times.push(k as f64);
            current.push(scale * rms_current * x);
            x = a * x + b * rng.random_range(-half_width..half_width);
        }
        let voltage = current.iter().map(|i| ocv + i * resistance).collect();
        Ok(HeatProfile::electrical(times, current, voltage, vec![ocv; n])?)
    }
}
