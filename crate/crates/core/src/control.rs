//! Mean-temperature regulation with per-side PI controllers acting on the
//! coolant temperature, fed by an open-loop model-based estimator.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cell::{BoundaryInput, CoolingConfig, Scenario, Side, AMBIENT_C};
use crate::error::{Error, Result};
use crate::galerkin::{project_initial_state, ReducedModel};
use crate::reference::fd::{FdSolver, FdState};
use crate::simulate::{compute_metrics, discretize, GridEvaluator, Stepper, ThermalMetrics};

/// PI law on the coolant temperature. The command is
/// `baseline + kp e + ki integral(e)`, clamped to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiController {
    pub kp: f64,
    pub ki: f64,
    pub integral: f64,
    pub output_limits: (f64, f64),
    pub anti_windup: bool,
    pub baseline: f64,
}

impl PiController {
    pub fn new(kp: f64, ki: f64, output_limits: (f64, f64), baseline: f64) -> Result<Self> {
        let (lo, hi) = output_limits;
        if !(lo <= hi) || ![kp, ki, lo, hi, baseline].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "invalid PI settings: kp={kp}, ki={ki}, limits=({lo}, {hi})"
            )));
        }
        Ok(Self { kp, ki, integral: 0.0, output_limits, anti_windup: true, baseline })
    }

    fn raw(&self, error: f64, integral: f64) -> f64 {
        self.baseline + self.kp * error + self.ki * integral
    }

    /// Updates the integral with `error * dt` and returns the clamped command.
    /// While clamped and pushing further into the limit, the integral is
    /// frozen.
    pub fn pi_step(&mut self, error: f64, dt: f64) -> f64 {
        let (lo, hi) = self.output_limits;
        let candidate = self.integral + error * dt;
        let raw = self.raw(error, candidate);
        let saturating = (raw > hi && error > 0.0) || (raw < lo && error < 0.0);
        if !(self.anti_windup && saturating) {
            self.integral = candidate;
        }
        self.raw(error, self.integral).clamp(lo, hi)
    }
}

/// Open-loop copy of a reduced model driven with the plant's inputs.
#[derive(Debug, Clone)]
pub struct EstimatorState {
    pub x: DVector<f64>,
    model: ReducedModel,
    stepper: Stepper,
    grid: GridEvaluator,
}

impl EstimatorState {
    /// Starts from the projection of a uniform temperature.
    pub fn new(model: ReducedModel, t_init: f64, u0: &BoundaryInput, dt: f64) -> Result<Self> {
        let x = project_initial_state(&model, t_init, u0)?;
        let stepper = discretize(&model, dt)?;
        let grid = GridEvaluator::new(&model, 41, 41)?;
        Ok(Self { x, model, stepper, grid })
    }

    pub fn model(&self) -> &ReducedModel {
        &self.model
    }

    pub fn metrics(&self, u: &BoundaryInput) -> ThermalMetrics {
        compute_metrics(&self.grid.reconstruct(&self.x, u), &self.model.spec)
    }

    pub fn mean(&self, u: &BoundaryInput) -> f64 {
        self.metrics(u).t_mean
    }

    pub fn advance(&mut self, u: &BoundaryInput, w: f64) {
        self.x = self.stepper.step(&self.x, u, w);
    }
}

/// Propagates the estimator one step and returns the new mean estimate.
pub fn estimate_mean(est: &mut EstimatorState, u: &BoundaryInput, w: f64) -> f64 {
    est.advance(u, w);
    est.mean(u)
}

/// Thermal plant seen by the closed loop.
pub trait Plant {
    /// Surface, core, top and bottom temperatures under input `u`.
    fn outputs(&self, u: &BoundaryInput) -> [f64; 4];
    fn metrics(&self, u: &BoundaryInput) -> ThermalMetrics;
    fn advance(&mut self, u: &BoundaryInput, q: f64) -> Result<()>;
}

#[derive(Debug, Clone)]
pub struct ReducedPlant {
    pub est: EstimatorState,
    step: usize,
}

impl ReducedPlant {
    pub fn new(model: ReducedModel, t_init: f64, u0: &BoundaryInput, dt: f64) -> Result<Self> {
        Ok(Self { est: EstimatorState::new(model, t_init, u0, dt)?, step: 0 })
    }
}

impl Plant for ReducedPlant {
    fn outputs(&self, u: &BoundaryInput) -> [f64; 4] {
        let y = self.est.model.outputs(&self.est.x, u);
        [y[0], y[1], y[2], y[3]]
    }

    fn metrics(&self, u: &BoundaryInput) -> ThermalMetrics {
        self.est.metrics(u)
    }

    fn advance(&mut self, u: &BoundaryInput, q: f64) -> Result<()> {
        self.est.advance(u, q);
        self.step += 1;
        if self.est.x.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NumericalFailure { step: self.step })
        }
    }
}

#[derive(Debug, Clone)]
pub struct FdPlant {
    pub solver: FdSolver,
    pub state: FdState,
}

impl FdPlant {
    pub fn new(solver: FdSolver, t_init: f64) -> Self {
        let state = solver.uniform_state(t_init);
        Self { solver, state }
    }
}

impl Plant for FdPlant {
    fn outputs(&self, _u: &BoundaryInput) -> [f64; 4] {
        self.solver.outputs(&self.state)
    }

    fn metrics(&self, _u: &BoundaryInput) -> ThermalMetrics {
        self.solver.metrics(&self.state)
    }

    fn advance(&mut self, u: &BoundaryInput, q: f64) -> Result<()> {
        self.solver.step(&mut self.state, u, q);
        if self.state.coeffs.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Oracle("non-finite finite-difference state".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSettings {
    #[serde(default = "default_kp")]
    pub kp: f64,
    #[serde(default = "default_ki")]
    pub ki: f64,
    #[serde(default = "default_limits")]
    pub output_limits: (f64, f64),
    /// Coolant temperature of inactive sides and PI offset, degrees C.
    #[serde(default = "default_baseline")]
    pub baseline: f64,
}

fn default_kp() -> f64 {
    2.0
}
fn default_ki() -> f64 {
    0.05
}
fn default_limits() -> (f64, f64) {
    (-20.0, 40.0)
}
fn default_baseline() -> f64 {
    AMBIENT_C
}

impl Default for ControlSettings {
    fn default() -> Self {
        Self {
            kp: default_kp(),
            ki: default_ki(),
            output_limits: default_limits(),
            baseline: default_baseline(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlTrace {
    pub times: Vec<f64>,
    pub active_sides: Vec<Side>,
    /// Coolant temperature commands per step, one entry per active side.
    pub commands: Vec<Vec<f64>>,
    pub inputs: Vec<BoundaryInput>,
    pub t_mean_est: Vec<f64>,
    pub metrics: Vec<ThermalMetrics>,
    pub outputs: Vec<[f64; 4]>,
}

impl ControlTrace {
    pub fn t_mean(&self) -> Vec<f64> {
        self.metrics.iter().map(|m| m.t_mean).collect()
    }

    /// Mean of `f` over the trailing `fraction` of the run.
    pub fn tail_mean(&self, fraction: f64, f: impl Fn(&ThermalMetrics) -> f64) -> f64 {
        let n = self.metrics.len();
        let start = ((1.0 - fraction) * n as f64).floor() as usize;
        let tail = &self.metrics[start.min(n.saturating_sub(1))..];
        tail.iter().map(f).sum::<f64>() / tail.len() as f64
    }
}

/// Boundary input for coolant temperatures: `h T` on +1 sides, `-h T` on -1.
fn inputs_for(cooling: &CoolingConfig, sides: &[Side], commands: &[f64], baseline: f64) -> BoundaryInput {
    let mut u = BoundaryInput::zero();
    for side in Side::ALL {
        u.set_from_coolant(side, cooling.h(side), baseline);
    }
    for (side, t) in sides.iter().zip(commands) {
        u.set_from_coolant(*side, cooling.h(*side), *t);
    }
    u
}

/// Closed loop: each step measures the plant, forms `setpoint - T_mean_hat`,
/// lets every active side's PI command its coolant temperature and advances
/// plant and estimator with the same inputs. `q` has one sample per recorded
/// time (W/m^3).
pub fn closed_loop_run(
    plant: &mut dyn Plant,
    estimator: &mut EstimatorState,
    scenario: Scenario,
    setpoint: f64,
    q: &[f64],
    dt: f64,
    settings: &ControlSettings,
) -> Result<ControlTrace> {
    if q.is_empty() {
        return Err(Error::InvalidArgument("empty heat profile".into()));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let cooling = estimator.model.cooling.clone();
    let shape = estimator.model.shape();
    let sides = scenario.active_sides(shape);
    let mut pis = vec![
        PiController::new(settings.kp, settings.ki, settings.output_limits, settings.baseline)?;
        sides.len()
    ];
    let mut trace = ControlTrace { active_sides: sides.clone(), ..Default::default() };
    let mut commands = vec![settings.baseline; sides.len()];
    let steps = q.len() - 1;
    for k in 0..=steps {
        let u_prev = inputs_for(&cooling, &sides, &commands, settings.baseline);
        let t_hat = estimator.mean(&u_prev);
        let error = setpoint - t_hat;
        for (c, pi) in commands.iter_mut().zip(pis.iter_mut()) {
            *c = pi.pi_step(error, dt);
        }
        let u = inputs_for(&cooling, &sides, &commands, settings.baseline);
        trace.times.push(k as f64 * dt);
        trace.commands.push(commands.clone());
        trace.inputs.push(u);
        trace.t_mean_est.push(t_hat);
        trace.outputs.push(plant.outputs(&u));
        trace.metrics.push(plant.metrics(&u));
        if k < steps {
            plant.advance(&u, q[k])?;
            estimator.advance(&u, q[k]);
        }
    }
    Ok(trace)
}
