//! Time stepping of reduced models, field reconstruction and thermal metrics.

use nalgebra::{DMatrix, DVector};

use crate::cell::{BoundaryInput, CellSpec, Side};
use crate::error::{Error, Result};
use crate::galerkin::ReducedModel;

/// Exact zero-order-hold discretization of one reduced model.
#[derive(Debug, Clone, PartialEq)]
pub struct Stepper {
    pub dt: f64,
    pub phi: DMatrix<f64>,
    pub gamma_u: DMatrix<f64>,
    pub gamma_w: DVector<f64>,
    input_sides: Vec<Side>,
}

impl Stepper {
    pub fn step(&self, x: &DVector<f64>, u: &BoundaryInput, w: f64) -> DVector<f64> {
        let uv = DVector::from_vec(u.to_vec(&self.input_sides));
        &self.phi * x + &self.gamma_u * uv + &self.gamma_w * w
    }
}

/// Builds `exp([[M, N], [0, 0]] dt)` with `M = G^-1 A`, `N = G^-1 [B F]`.
pub fn discretize(model: &ReducedModel, dt: f64) -> Result<Stepper> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let o = model.order();
    let ni = model.n_inputs();
    let chol = model
        .g
        .clone()
        .cholesky()
        .ok_or(Error::SingularMatrix("mass matrix G"))?;
    let ga = chol.solve(&model.a);
    let gb = chol.solve(&model.b);
    let gf = chol.solve(&model.f);
    let size = o + ni + 1;
    let mut aug = DMatrix::zeros(size, size);
    aug.view_mut((0, 0), (o, o)).copy_from(&(ga * dt));
    aug.view_mut((0, o), (o, ni)).copy_from(&(gb * dt));
    aug.view_mut((0, o + ni), (o, 1)).copy_from(&(gf * dt));
    let e = aug.exp();
    if e.iter().any(|v| !v.is_finite() || v.abs() > 1e150) {
        return Err(Error::Instability(format!(
            "matrix exponential overflowed for dt = {dt}"
        )));
    }
    Ok(Stepper {
        dt,
        phi: e.view((0, 0), (o, o)).into_owned(),
        gamma_u: e.view((0, o), (o, ni)).into_owned(),
        gamma_w: e.view((0, o + ni), (o, 1)).column(0).into_owned(),
        input_sides: model.input_sides.clone(),
    })
}

/// Temperatures on a tensor grid of scaled coordinates, with optional
/// analytic derivative fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
    /// `values[(i, j)]` at `(xi[i], zeta[j])`, in degrees C.
    pub values: DMatrix<f64>,
    pub d_xi: Option<DMatrix<f64>>,
    pub d_zeta: Option<DMatrix<f64>>,
}

/// `n` uniformly spaced nodes on `[-1, 1]` including both ends.
pub fn uniform_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                1.0
            } else {
                -1.0 + 2.0 * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

impl FieldGrid {
    /// Grid without derivative information; gradients fall back to
    /// finite differences.
    pub fn from_values(xi: Vec<f64>, zeta: Vec<f64>, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != xi.len() || values.ncols() != zeta.len() {
            return Err(Error::InvalidArgument("grid values do not match node counts".into()));
        }
        if xi.iter().chain(&zeta).any(|v| v.abs() > 1.0 + 1e-12) {
            return Err(Error::InvalidArgument("grid nodes must lie in [-1, 1]".into()));
        }
        Ok(Self { xi, zeta, values, d_xi: None, d_zeta: None })
    }

    pub fn uniform(n_xi: usize, n_zeta: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let xi = uniform_nodes(n_xi);
        let zeta = uniform_nodes(n_zeta);
        let values = DMatrix::from_fn(n_xi, n_zeta, |i, j| f(xi[i], zeta[j]));
        Self { xi, zeta, values, d_xi: None, d_zeta: None }
    }

    pub fn value_at_node(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }
}

fn fd_derivative(nodes: &[f64], values: &DMatrix<f64>, along_rows: bool) -> DMatrix<f64> {
    let (nr, nc) = values.shape();
    DMatrix::from_fn(nr, nc, |i, j| {
        let (k, n) = if along_rows { (i, nr) } else { (j, nc) };
        let get = |kk: usize| if along_rows { values[(kk, j)] } else { values[(i, kk)] };
        let (lo, hi) = (k.saturating_sub(1), (k + 1).min(n - 1));
        if hi == lo {
            0.0
        } else {
            (get(hi) - get(lo)) / (nodes[hi] - nodes[lo])
        }
    })
}

/// Precomputed basis and lifting values on a reconstruction grid.
#[derive(Debug, Clone)]
pub struct GridEvaluator {
    xi: Vec<f64>,
    zeta: Vec<f64>,
    n: usize,
    vx: DMatrix<f64>,
    dx: DMatrix<f64>,
    vz: DMatrix<f64>,
    dz: DMatrix<f64>,
    /// Per input side: value, d/dxi, d/dzeta of the unit lifting component.
    lifting: Vec<(Side, [DMatrix<f64>; 3])>,
}

impl GridEvaluator {
    pub fn new(model: &ReducedModel, n_xi: usize, n_zeta: usize) -> Result<Self> {
        if n_xi < 2 || n_zeta < 2 {
            return Err(Error::InvalidArgument("reconstruction grid needs at least 2x2 nodes".into()));
        }
        let xi = uniform_nodes(n_xi);
        let zeta = uniform_nodes(n_zeta);
        let (m, n) = (model.m, model.n);
        let mut vx = DMatrix::zeros(n_xi, m);
        let mut dx = DMatrix::zeros(n_xi, m);
        for (i, &x) in xi.iter().enumerate() {
            let b = model.xi_basis.eval_all(x);
            for k in 0..m {
                vx[(i, k)] = b.value[k];
                dx[(i, k)] = b.d1[k];
            }
        }
        let mut vz = DMatrix::zeros(n_zeta, n);
        let mut dz = DMatrix::zeros(n_zeta, n);
        for (j, &z) in zeta.iter().enumerate() {
            let b = model.zeta_basis.eval_all(z);
            for k in 0..n {
                vz[(j, k)] = b.value[k];
                dz[(j, k)] = b.d1[k];
            }
        }
        let mut lifting = Vec::new();
        for side in Side::ALL {
            let mut v = DMatrix::zeros(n_xi, n_zeta);
            let mut gx = DMatrix::zeros(n_xi, n_zeta);
            let mut gz = DMatrix::zeros(n_xi, n_zeta);
            for (i, &x) in xi.iter().enumerate() {
                for (j, &z) in zeta.iter().enumerate() {
                    let d = model.particular.component_derivs(side, x, z);
                    v[(i, j)] = d.value;
                    gx[(i, j)] = d.d_xi;
                    gz[(i, j)] = d.d_zeta;
                }
            }
            lifting.push((side, [v, gx, gz]));
        }
        Ok(Self { xi, zeta, n, vx, dx, vz, dz, lifting })
    }

    pub fn reconstruct(&self, x: &DVector<f64>, u: &BoundaryInput) -> FieldGrid {
        let coeff = DMatrix::from_row_slice(x.len() / self.n, self.n, x.as_slice());
        let cz = &coeff * self.vz.transpose();
        let mut values = &self.vx * &cz;
        let mut d_xi = &self.dx * &cz;
        let mut d_zeta = &self.vx * &coeff * self.dz.transpose();
        for (side, [v, gx, gz]) in &self.lifting {
            let us = u.get(*side);
            if us != 0.0 {
                values += v * us;
                d_xi += gx * us;
                d_zeta += gz * us;
            }
        }
        FieldGrid {
            xi: self.xi.clone(),
            zeta: self.zeta.clone(),
            values,
            d_xi: Some(d_xi),
            d_zeta: Some(d_zeta),
        }
    }
}

/// Total field `T_h + sum T_p^side u_side` on a uniform `n_xi x n_zeta` grid.
pub fn reconstruct_field(
    model: &ReducedModel,
    x: &DVector<f64>,
    u: &BoundaryInput,
    n_xi: usize,
    n_zeta: usize,
) -> Result<FieldGrid> {
    Ok(GridEvaluator::new(model, n_xi, n_zeta)?.reconstruct(x, u))
}

/// Thermal metrics of one field snapshot. Gradients in K/m.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThermalMetrics {
    pub t_mean: f64,
    pub t_max: f64,
    pub t_min: f64,
    pub delta_t: f64,
    pub grad_r_max: f64,
    pub grad_z_max: f64,
    pub grad_r_mean: f64,
    pub grad_z_mean: f64,
}

fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { nodes[i] - nodes[i - 1] } else { 0.0 };
            let right = if i + 1 < n { nodes[i + 1] - nodes[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// Volume-weighted mean, extrema and gradient measures of a field.
pub fn compute_metrics(grid: &FieldGrid, spec: &CellSpec) -> ThermalMetrics {
    let gx = grid
        .d_xi
        .clone()
        .unwrap_or_else(|| fd_derivative(&grid.xi, &grid.values, true));
    let gz = grid
        .d_zeta
        .clone()
        .unwrap_or_else(|| fd_derivative(&grid.zeta, &grid.values, false));
    let (a, b) = (spec.xi_scale(), spec.zeta_scale());
    let wx: Vec<f64> = trapezoid_weights(&grid.xi)
        .iter()
        .zip(&grid.xi)
        .map(|(w, x)| w * spec.volume_weight(*x))
        .collect();
    let wz = trapezoid_weights(&grid.zeta);
    let (mut total_w, mut sum_t, mut sum_gr, mut sum_gz) = (0.0, 0.0, 0.0, 0.0);
    let mut m = ThermalMetrics {
        t_max: f64::NEG_INFINITY,
        t_min: f64::INFINITY,
        ..Default::default()
    };
    for i in 0..grid.xi.len() {
        for j in 0..grid.zeta.len() {
            let t = grid.values[(i, j)];
            let gr = (a * gx[(i, j)]).abs();
            let gzz = (b * gz[(i, j)]).abs();
            let w = wx[i] * wz[j];
            total_w += w;
            sum_t += w * t;
            sum_gr += w * gr;
            sum_gz += w * gzz;
            m.t_max = m.t_max.max(t);
            m.t_min = m.t_min.min(t);
            m.grad_r_max = m.grad_r_max.max(gr);
            m.grad_z_max = m.grad_z_max.max(gzz);
        }
    }
    m.t_mean = sum_t / total_w;
    m.grad_r_mean = sum_gr / total_w;
    m.grad_z_mean = sum_gz / total_w;
    // The weighted mean can exceed the extrema by rounding on flat fields.
    m.t_mean = m.t_mean.clamp(m.t_min, m.t_max);
    m.delta_t = m.t_max - m.t_min;
    m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub grid: (usize, usize),
    /// Metrics every `metrics_stride` steps; 0 disables metrics.
    pub metrics_stride: usize,
    pub keep_states: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { grid: (41, 41), metrics_stride: 1, keep_states: true }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimResult {
    pub times: Vec<f64>,
    /// Empty unless `RunOptions::keep_states`.
    pub states: Vec<DVector<f64>>,
    /// Surface, core, top and bottom temperatures per step.
    pub outputs: Vec<[f64; 4]>,
    pub metric_steps: Vec<usize>,
    pub metrics: Vec<ThermalMetrics>,
}

impl SimResult {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Metric trace reduced with `f`, e.g. `|m| m.t_max`.
    pub fn metric_series(&self, f: impl Fn(&ThermalMetrics) -> f64) -> Vec<f64> {
        self.metrics.iter().map(f).collect()
    }
}

/// Piecewise-constant input samples. A single sample means constant.
fn sample<T: Copy>(v: &[T], k: usize) -> T {
    v[k.min(v.len() - 1)]
}

/// Steps the model from `x0`. `w` has one sample per recorded time
/// (`steps + 1` values); `u` either matches or holds a single constant value.
pub fn run(
    model: &ReducedModel,
    x0: &DVector<f64>,
    u: &[BoundaryInput],
    w: &[f64],
    dt: f64,
    opts: &RunOptions,
) -> Result<SimResult> {
    let stepper = discretize(model, dt)?;
    run_with(model, &stepper, x0, u, w, opts)
}

pub fn run_with(
    model: &ReducedModel,
    stepper: &Stepper,
    x0: &DVector<f64>,
    u: &[BoundaryInput],
    w: &[f64],
    opts: &RunOptions,
) -> Result<SimResult> {
    if w.is_empty() || u.is_empty() {
        return Err(Error::InvalidArgument("input profiles must not be empty".into()));
    }
    if u.len() != 1 && u.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "boundary input has {} samples, heat profile {}",
            u.len(),
            w.len()
        )));
    }
    if x0.len() != model.order() {
        return Err(Error::InvalidArgument("initial state has wrong dimension".into()));
    }
    let evaluator = if opts.metrics_stride > 0 {
        Some(GridEvaluator::new(model, opts.grid.0, opts.grid.1)?)
    } else {
        None
    };
    let steps = w.len() - 1;
    let mut res = SimResult {
        times: Vec::with_capacity(steps + 1),
        outputs: Vec::with_capacity(steps + 1),
        ..Default::default()
    };
    let mut x = x0.clone();
    for k in 0..=steps {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure { step: k });
        }
        let uk = sample(u, k);
        let y = model.outputs(&x, &uk);
        res.times.push(k as f64 * stepper.dt);
        res.outputs.push([y[0], y[1], y[2], y[3]]);
        if let Some(ev) = &evaluator {
            if k % opts.metrics_stride == 0 || k == steps {
                res.metric_steps.push(k);
                res.metrics.push(compute_metrics(&ev.reconstruct(&x, &uk), &model.spec));
            }
        }
        if k < steps {
            let next = stepper.step(&x, &uk, w[k]);
            if opts.keep_states {
                res.states.push(std::mem::replace(&mut x, next));
            } else {
                x = next;
            }
        } else if opts.keep_states {
            res.states.push(x.clone());
        }
    }
    Ok(res)
}
