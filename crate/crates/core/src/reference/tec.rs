//! Two-state lumped thermal equivalent circuit (core and surface node).
//!
//! ```text
//! C_c dT_c/dt = q + (T_s - T_c) / R_c
//! C_s dT_s/dt = (T_inf - T_s) / R_u + (T_c - T_s) / R_c
//! ```

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2};
use serde::{Deserialize, Serialize};

use crate::cell::{CellSpec, Geometry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TecModel {
    /// Core heat capacity, J/K.
    pub c_c: f64,
    /// Surface heat capacity, J/K.
    pub c_s: f64,
    /// Core-to-surface conduction resistance, K/W.
    pub r_c: f64,
    /// Surface-to-coolant convection resistance, K/W.
    pub r_u: f64,
    /// Coolant temperature, degrees C.
    pub t_inf: f64,
}

impl Default for TecModel {
    /// Identified parameters of the 45 Ah LFP cell.
    fn default() -> Self {
        Self { c_c: 1079.6, c_s: 48.35, r_c: 0.65, r_u: 0.08, t_inf: 15.0 }
    }
}

impl TecModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c_c", self.c_c), ("c_s", self.c_s), ("r_c", self.r_c), ("r_u", self.r_u)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.t_inf.is_finite() {
            return Err(Error::InvalidArgument("t_inf must be finite".into()));
        }
        Ok(())
    }

    /// State matrix for `x = [T_c, T_s]`.
    pub fn a(&self) -> Matrix2<f64> {
        let cc = 1.0 / (self.c_c * self.r_c);
        let sc = 1.0 / (self.c_s * self.r_c);
        Matrix2::new(-cc, cc, sc, -sc - 1.0 / (self.c_s * self.r_u))
    }

    /// Input matrix for `v = [q (W), T_inf]`.
    pub fn b(&self) -> Matrix2<f64> {
        Matrix2::new(1.0 / self.c_c, 0.0, 0.0, 1.0 / (self.c_s * self.r_u))
    }

    /// Steady state `(T_c, T_s)` for constant heat `q` in W.
    pub fn steady_state(&self, q: f64) -> (f64, f64) {
        let ts = self.t_inf + q * self.r_u;
        (ts + q * self.r_c, ts)
    }
}

/// Exact zero-order-hold discretization of a [`TecModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TecStepper {
    pub phi: Matrix2<f64>,
    pub gamma: Matrix2<f64>,
    pub t_inf: f64,
}

impl TecStepper {
    pub fn new(m: &TecModel, dt: f64) -> Result<Self> {
        m.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        let mut aug = Matrix4::zeros();
        aug.fixed_view_mut::<2, 2>(0, 0).copy_from(&(m.a() * dt));
        aug.fixed_view_mut::<2, 2>(0, 2).copy_from(&(m.b() * dt));
        let e = aug.exp();
        Ok(Self {
            phi: e.fixed_view::<2, 2>(0, 0).into_owned(),
            gamma: e.fixed_view::<2, 2>(0, 2).into_owned(),
            t_inf: m.t_inf,
        })
    }

    pub fn step(&self, t_c: f64, t_s: f64, q: f64) -> (f64, f64) {
        let x = self.phi * Vector2::new(t_c, t_s) + self.gamma * Vector2::new(q, self.t_inf);
        (x[0], x[1])
    }

    /// Dense copies for generic LTI loops.
    pub fn dense(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        (
            DMatrix::from_column_slice(2, 2, self.phi.as_slice()),
            DMatrix::from_column_slice(2, 2, self.gamma.as_slice()),
        )
    }
}

/// One step of the circuit with heat `q` (W) held over `dt`.
pub fn tec_step(m: &TecModel, t_c: f64, t_s: f64, q: f64, dt: f64) -> Result<(f64, f64)> {
    Ok(TecStepper::new(m, dt)?.step(t_c, t_s, q))
}

/// Mean temperature `(T_s + T_c) / 2` and radial gradient
/// `(T_c - T_s) / (R_out - R_in)` of a cylindrical cell.
pub fn tec_metrics(t_c: f64, t_s: f64, spec: &CellSpec) -> Result<(f64, f64)> {
    match spec.geometry {
        Geometry::Cylindrical { r_out, r_in } => Ok((0.5 * (t_s + t_c), (t_c - t_s) / (r_out - r_in))),
        Geometry::Pouch { .. } => Err(Error::UnsupportedShape(
            "the equivalent-circuit metrics are defined for cylindrical cells".into(),
        )),
    }
}

/// Simulates the circuit from `(T_c, T_s) = (t0, t0)`; `q` in W, one
/// sample per recorded time.
pub fn tec_run(m: &TecModel, t0: f64, q: &[f64], dt: f64) -> Result<Vec<(f64, f64)>> {
    let st = TecStepper::new(m, dt)?;
    let mut out = Vec::with_capacity(q.len());
    let mut x = (t0, t0);
    for (k, qk) in q.iter().enumerate() {
        out.push(x);
        if k + 1 < q.len() {
            x = st.step(x.0, x.1, *qk);
        }
    }
    Ok(out)
}
