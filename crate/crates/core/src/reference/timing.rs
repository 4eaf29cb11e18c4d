//! Wall-clock comparison of reduced models and the equivalent circuit.
//!
//! Every model is driven through the same dense discrete-time loop
//! `x <- Phi x + Gamma v`, `y = C x + D v`, so the numbers compare state
//! dimensions rather than implementation details.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::galerkin::ReducedModel;
use crate::reference::tec::{TecModel, TecStepper};
use crate::simulate::discretize;

/// A model entry of the timing table.
#[derive(Debug, Clone)]
pub enum TimedModel {
    Reduced { label: String, model: ReducedModel },
    Tec { label: String, model: TecModel, volume: f64 },
}

impl TimedModel {
    pub fn label(&self) -> &str {
        match self {
            TimedModel::Reduced { label, .. } | TimedModel::Tec { label, .. } => label,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub label: String,
    pub states: usize,
    pub mean_ms: f64,
    pub min_ms: f64,
    /// Checksum of the last output so the loop cannot be optimized away.
    pub checksum: f64,
}

struct Lti {
    phi: DMatrix<f64>,
    gamma: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
    x0: DVector<f64>,
    /// Input vector as a function of the volumetric heat sample.
    input: Box<dyn Fn(f64, &mut DVector<f64>)>,
}

fn build(entry: &TimedModel, dt: f64) -> Result<Lti> {
    match entry {
        TimedModel::Reduced { model, .. } => {
            let st = discretize(model, dt)?;
            let ni = model.n_inputs();
            let mut gamma = DMatrix::zeros(model.order(), ni + 1);
            gamma.view_mut((0, 0), (model.order(), ni)).copy_from(&st.gamma_u);
            gamma.set_column(ni, &st.gamma_w);
            let mut d = DMatrix::zeros(4, ni + 1);
            d.view_mut((0, 0), (4, ni)).copy_from(&model.dft);
            let u = model.input_vector(&model.cooling.inputs());
            Ok(Lti {
                phi: st.phi,
                gamma,
                c: model.c.clone(),
                d,
                x0: DVector::zeros(model.order()),
                input: Box::new(move |q, v| {
                    v.rows_mut(0, ni).copy_from(&u);
                    v[ni] = q;
                }),
            })
        }
        TimedModel::Tec { model, volume, .. } => {
            let st = TecStepper::new(model, dt)?;
            let (phi, gamma) = st.dense();
            let (t_inf, vol) = (model.t_inf, *volume);
            Ok(Lti {
                phi,
                gamma,
                c: DMatrix::identity(2, 2),
                d: DMatrix::zeros(2, 2),
                x0: DVector::from_element(2, model.t_inf),
                input: Box::new(move |q, v| {
                    v[0] = q * vol;
                    v[1] = t_inf;
                }),
            })
        }
    }
}

fn simulate_once(entry: &TimedModel, q: &[f64], dt: f64) -> Result<(usize, f64)> {
    let lti = build(entry, dt)?;
    let mut x = lti.x0.clone();
    let mut next = x.clone();
    let mut v = DVector::zeros(lti.gamma.ncols());
    let mut y = DVector::zeros(lti.c.nrows());
    for &qk in q {
        (lti.input)(qk, &mut v);
        y.gemv(1.0, &lti.c, &x, 0.0);
        y.gemv(1.0, &lti.d, &v, 1.0);
        next.gemv(1.0, &lti.phi, &x, 0.0);
        next.gemv(1.0, &lti.gamma, &v, 1.0);
        std::mem::swap(&mut x, &mut next);
    }
    Ok((lti.phi.nrows(), y.sum()))
}

/// Mean and minimum wall time per model over `repetitions` runs of the same
/// volumetric heat profile `q` (W/m^3) at step `dt`.
pub fn timing_harness(models: &[TimedModel], q: &[f64], dt: f64, repetitions: usize) -> Result<Vec<TimingRow>> {
    if repetitions < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 repetitions, got {repetitions}")));
    }
    if q.is_empty() {
        return Err(Error::InvalidArgument("empty heat profile".into()));
    }
    let mut rows = Vec::with_capacity(models.len());
    for entry in models {
        // Warm-up run, not timed.
        let (states, checksum) = simulate_once(entry, q, dt)?;
        let mut times = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            let start = Instant::now();
            let (_, c) = simulate_once(entry, q, dt)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            std::hint::black_box(c);
        }
        rows.push(TimingRow {
            label: entry.label().to_string(),
            states,
            mean_ms: times.iter().sum::<f64>() / times.len() as f64,
            min_ms: times.iter().cloned().fold(f64::INFINITY, f64::min),
            checksum,
        });
    }
    Ok(rows)
}
