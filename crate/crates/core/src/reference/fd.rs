//! Finite-difference solver for the unscaled two-dimensional heat equation.
//!
//! Nodes sit on both boundaries. The radial operator is
//! `k_r (T_rr + T_r / r)` with central differences, Robin conditions are
//! closed with ghost nodes. Both one-dimensional operators are tridiagonal
//! with positive off-diagonal products, so a diagonal similarity makes them
//! symmetric; the 2D operator is their Kronecker sum and is diagonalized
//! direction by direction. Time stepping (Crank-Nicolson or backward Euler)
//! is then applied mode by mode, which is exact linear algebra for the
//! chosen scheme.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::cell::{BoundaryInput, CellSpec, CoolingConfig, Shape, Side};
use crate::error::{Error, Result};
use crate::simulate::ThermalMetrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FdScheme {
    BackwardEuler,
    #[default]
    CrankNicolson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub n_r: usize,
    pub n_z: usize,
    pub dt: f64,
    #[serde(default)]
    pub scheme: FdScheme,
}

impl FdConfig {
    pub fn new(n_r: usize, n_z: usize, dt: f64, scheme: FdScheme) -> Self {
        Self { n_r, n_z, dt, scheme }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_r < 3 || self.n_z < 3 {
            return Err(Error::InvalidArgument(format!(
                "finite-difference grid needs at least 3 nodes per direction, got {}x{}",
                self.n_r, self.n_z
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

/// Diagonalized one-dimensional operator `L = V diag(lambda) V^-1`.
#[derive(Debug, Clone)]
struct Modes {
    nodes: Vec<f64>,
    lambda: DVector<f64>,
    v: DMatrix<f64>,
    v_inv: DMatrix<f64>,
    /// `V^-1` applied to the boundary source patterns at the low and high end,
    /// per unit input.
    src_lo: DVector<f64>,
    src_hi: DVector<f64>,
    /// `V^-1 1`.
    ones: DVector<f64>,
}

/// Tridiagonal operator `k (d2/dx2 + c/x d/dx)` on `n` nodes over
/// `[x0, x1]` with ghost-node Robin closures. Returns the matrix and the
/// source vectors multiplying the low-end and high-end inputs.
///
/// Conventions: at the high end `h T + k T_x = u_hi`, at the low end
/// `-h T + k T_x = u_lo`, matching the outward-flux form used by the
/// reduced model.
fn operator_1d(
    x0: f64,
    x1: f64,
    n: usize,
    k: f64,
    curvature: bool,
    h_lo: f64,
    h_hi: f64,
) -> (DMatrix<f64>, Vec<f64>, DVector<f64>, DVector<f64>) {
    let dx = (x1 - x0) / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { x1 } else { x0 + dx * i as f64 })
        .collect();
    let mut l = DMatrix::zeros(n, n);
    let mut s_lo = DVector::zeros(n);
    let mut s_hi = DVector::zeros(n);
    for i in 0..n {
        let c = if curvature { 1.0 / (2.0 * dx * nodes[i]) } else { 0.0 };
        let west = k * (1.0 / (dx * dx) - c);
        let east = k * (1.0 / (dx * dx) + c);
        l[(i, i)] = -2.0 * k / (dx * dx);
        if i == 0 {
            // Ghost T_{-1} = T_1 - 2 dx T_x, with k T_x = h T_0 + u_lo.
            l[(0, 1)] += east + west;
            l[(0, 0)] -= west * 2.0 * dx * h_lo / k;
            s_lo[0] = -west * 2.0 * dx / k;
        } else if i + 1 == n {
            // Ghost T_n = T_{n-2} + 2 dx T_x, with k T_x = u_hi - h T_{n-1}.
            l[(i, i - 1)] += west + east;
            l[(i, i)] -= east * 2.0 * dx * h_hi / k;
            s_hi[i] = east * 2.0 * dx / k;
        } else {
            l[(i, i - 1)] = west;
            l[(i, i + 1)] = east;
        }
    }
    (l, nodes, s_lo, s_hi)
}

fn diagonalize(l: DMatrix<f64>, nodes: Vec<f64>, s_lo: DVector<f64>, s_hi: DVector<f64>) -> Result<Modes> {
    let n = l.nrows();
    let mut d = DVector::from_element(n, 1.0);
    for i in 0..n - 1 {
        let (up, down) = (l[(i, i + 1)], l[(i + 1, i)]);
        if !(up > 0.0 && down > 0.0) {
            return Err(Error::Oracle(format!("operator not symmetrizable at node {i}")));
        }
        d[i + 1] = d[i] * (up / down).sqrt();
    }
    let s = DMatrix::from_fn(n, n, |i, j| d[i] * l[(i, j)] / d[j]);
    let sym = (&s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let q = eig.eigenvectors;
    // L = D^-1 Q Lambda Q^T D
    let v = DMatrix::from_fn(n, n, |i, j| q[(i, j)] / d[i]);
    let v_inv = DMatrix::from_fn(n, n, |i, j| q[(j, i)] * d[j]);
    if v.iter().chain(v_inv.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Oracle("non-finite eigenvectors".into()));
    }
    let ones = &v_inv * DVector::from_element(n, 1.0);
    Ok(Modes {
        src_lo: &v_inv * s_lo,
        src_hi: &v_inv * s_hi,
        ones,
        nodes,
        lambda: eig.eigenvalues,
        v,
        v_inv,
    })
}

/// Lagrange weights of the 4 nodes around `x` (or fewer near the ends).
fn interp_weights(nodes: &[f64], x: f64) -> DVector<f64> {
    let n = nodes.len();
    let mut w = DVector::zeros(n);
    if let Some(i) = nodes.iter().position(|v| (v - x).abs() < 1e-14 * (1.0 + x.abs())) {
        w[i] = 1.0;
        return w;
    }
    let upper = nodes.iter().position(|v| *v > x).unwrap_or(n - 1).max(1);
    let lo = upper.saturating_sub(2).min(n.saturating_sub(4));
    let hi = (lo + 4).min(n);
    for i in lo..hi {
        let mut li = 1.0;
        for j in lo..hi {
            if j != i {
                li *= (x - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        w[i] = li;
    }
    w
}

/// Trapezoid weights, optionally multiplied by the node coordinate.
fn trapezoid(nodes: &[f64], radial: bool) -> DVector<f64> {
    let n = nodes.len();
    DVector::from_fn(n, |i, _| {
        let left = if i > 0 { nodes[i] - nodes[i - 1] } else { 0.0 };
        let right = if i + 1 < n { nodes[i + 1] - nodes[i] } else { 0.0 };
        0.5 * (left + right) * if radial { nodes[i] } else { 1.0 }
    })
}

/// Modal coefficients of the nodal field, `T = V_r C V_z^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdState {
    pub coeffs: DMatrix<f64>,
}

/// Assembled finite-difference oracle for one cell and cooling configuration.
#[derive(Debug, Clone)]
pub struct FdSolver {
    spec: CellSpec,
    cfg: FdConfig,
    r: Modes,
    z: Modes,
    /// Per-mode amplification and forcing gain for one step.
    amp: DMatrix<f64>,
    gain: DMatrix<f64>,
    /// Projections for the output points and the volume mean.
    out_r: Vec<DVector<f64>>,
    out_z: Vec<DVector<f64>>,
    mean_r: DVector<f64>,
    mean_z: DVector<f64>,
}

impl FdSolver {
    pub fn new(spec: &CellSpec, cooling: &CoolingConfig, cfg: FdConfig) -> Result<Self> {
        spec.validate()?;
        cooling.validate_for(spec.shape())?;
        cfg.validate()?;
        let rc = spec.volumetric_heat_capacity();
        let (r0, r1, curv) = match spec.shape() {
            Shape::Cylindrical => (spec.xi_to_physical(-1.0), spec.xi_to_physical(1.0), true),
            Shape::Pouch => (0.0, spec.thickness(), false),
        };
        let (lr, nr, slo, shi) = operator_1d(
            r0,
            r1,
            cfg.n_r,
            spec.k_radial,
            curv,
            cooling.h(Side::Core),
            cooling.h(Side::Surface),
        );
        let r = diagonalize(lr, nr, slo, shi)?;
        let (lz, nz, slo, shi) = operator_1d(
            0.0,
            spec.length,
            cfg.n_z,
            spec.k_axial,
            false,
            cooling.h(Side::Bottom),
            cooling.h(Side::Top),
        );
        let z = diagonalize(lz, nz, slo, shi)?;

        let dt = cfg.dt;
        let mut amp = DMatrix::zeros(cfg.n_r, cfg.n_z);
        let mut gain = DMatrix::zeros(cfg.n_r, cfg.n_z);
        for a in 0..cfg.n_r {
            for b in 0..cfg.n_z {
                let mu = (r.lambda[a] + z.lambda[b]) / rc;
                let (p, g) = match cfg.scheme {
                    FdScheme::CrankNicolson => {
                        let den = 1.0 - 0.5 * mu * dt;
                        ((1.0 + 0.5 * mu * dt) / den, dt / den)
                    }
                    FdScheme::BackwardEuler => {
                        let den = 1.0 - mu * dt;
                        (1.0 / den, dt / den)
                    }
                };
                if !(p.is_finite() && g.is_finite()) {
                    return Err(Error::Oracle(format!("singular step factor in mode ({a}, {b})")));
                }
                amp[(a, b)] = p;
                gain[(a, b)] = g / rc;
            }
        }

        let mid_r = 0.5 * (r0 + r1);
        let mid_z = 0.5 * spec.length;
        let points = [(r1, mid_z), (r0, mid_z), (mid_r, spec.length), (mid_r, 0.0)];
        let out_r = points
            .iter()
            .map(|p| r.v.transpose() * interp_weights(&r.nodes, p.0))
            .collect();
        let out_z = points
            .iter()
            .map(|p| z.v.transpose() * interp_weights(&z.nodes, p.1))
            .collect();
        let wr = trapezoid(&r.nodes, curv);
        let wz = trapezoid(&z.nodes, false);
        let mean_r = r.v.transpose() * &wr / wr.sum();
        let mean_z = z.v.transpose() * &wz / wz.sum();
        Ok(Self {
            spec: *spec,
            cfg,
            r,
            z,
            amp,
            gain,
            out_r,
            out_z,
            mean_r,
            mean_z,
        })
    }

    pub fn config(&self) -> &FdConfig {
        &self.cfg
    }

    /// Physical node coordinates across the cell and along its height.
    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.r.nodes, &self.z.nodes)
    }

    pub fn uniform_state(&self, t: f64) -> FdState {
        FdState { coeffs: &self.r.ones * self.z.ones.transpose() * t }
    }

    pub fn state_from_field(&self, field: &DMatrix<f64>) -> FdState {
        FdState { coeffs: &self.r.v_inv * field * self.z.v_inv.transpose() }
    }

    /// Modal forcing for constant inputs `u` and heat `q`.
    fn forcing(&self, u: &BoundaryInput, q: f64) -> DMatrix<f64> {
        let fr = &self.r.src_lo * u.get(Side::Core) + &self.r.src_hi * u.get(Side::Surface);
        let fz = &self.z.src_lo * u.get(Side::Bottom) + &self.z.src_hi * u.get(Side::Top);
        &fr * self.z.ones.transpose() + &self.r.ones * fz.transpose() + &self.r.ones * self.z.ones.transpose() * q
    }

    /// One step with inputs held over the step.
    pub fn step(&self, state: &mut FdState, u: &BoundaryInput, q: f64) {
        let f = self.forcing(u, q);
        state.coeffs.component_mul_assign(&self.amp);
        state.coeffs += f.component_mul(&self.gain);
    }

    /// Steady state for constant inputs.
    pub fn steady_state(&self, u: &BoundaryInput, q: f64) -> Result<FdState> {
        let rc = self.spec.volumetric_heat_capacity();
        let f = self.forcing(u, q);
        let mut c = DMatrix::zeros(self.cfg.n_r, self.cfg.n_z);
        for a in 0..self.cfg.n_r {
            for b in 0..self.cfg.n_z {
                let mu = self.r.lambda[a] + self.z.lambda[b];
                if mu.abs() < 1e-12 * rc {
                    return Err(Error::Oracle("no steady state: operator is singular".into()));
                }
                c[(a, b)] = -f[(a, b)] / mu;
            }
        }
        Ok(FdState { coeffs: c })
    }

    /// Nodal temperatures, rows across the cell and columns along its height.
    pub fn field(&self, state: &FdState) -> DMatrix<f64> {
        &self.r.v * &state.coeffs * self.z.v.transpose()
    }

    /// Surface, core, top and bottom mid-point temperatures.
    pub fn outputs(&self, state: &FdState) -> [f64; 4] {
        let mut y = [0.0; 4];
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = self.out_r[k].dot(&(&state.coeffs * &self.out_z[k]));
        }
        y
    }

    /// Volume-weighted mean temperature.
    pub fn mean(&self, state: &FdState) -> f64 {
        self.mean_r.dot(&(&state.coeffs * &self.mean_z))
    }

    /// Metrics of the nodal field; gradients by second-order differences.
    pub fn metrics(&self, state: &FdState) -> ThermalMetrics {
        field_metrics(&self.field(state), &self.r.nodes, &self.z.nodes, self.spec.shape())
    }
}

fn gradient(nodes: &[f64], values: &DMatrix<f64>, along_rows: bool) -> DMatrix<f64> {
    let (nr, nc) = values.shape();
    DMatrix::from_fn(nr, nc, |i, j| {
        let (k, n) = if along_rows { (i, nr) } else { (j, nc) };
        let get = |kk: usize| if along_rows { values[(kk, j)] } else { values[(i, kk)] };
        let hx = nodes[1] - nodes[0];
        if k == 0 {
            (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * hx)
        } else if k + 1 == n {
            (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * hx)
        } else {
            (get(k + 1) - get(k - 1)) / (nodes[k + 1] - nodes[k - 1])
        }
    })
}

/// Metrics of a nodal field in physical coordinates.
pub fn field_metrics(field: &DMatrix<f64>, r_nodes: &[f64], z_nodes: &[f64], shape: Shape) -> ThermalMetrics {
    let gr = gradient(r_nodes, field, true);
    let gz = gradient(z_nodes, field, false);
    let wr = trapezoid(r_nodes, shape == Shape::Cylindrical);
    let wz = trapezoid(z_nodes, false);
    let total = wr.sum() * wz.sum();
    let mut m = ThermalMetrics {
        t_max: f64::NEG_INFINITY,
        t_min: f64::INFINITY,
        ..Default::default()
    };
    let (mut st, mut sr, mut sz) = (0.0, 0.0, 0.0);
    for i in 0..field.nrows() {
        for j in 0..field.ncols() {
            let w = wr[i] * wz[j];
            let t = field[(i, j)];
            st += w * t;
            sr += w * gr[(i, j)].abs();
            sz += w * gz[(i, j)].abs();
            m.t_max = m.t_max.max(t);
            m.t_min = m.t_min.min(t);
            m.grad_r_max = m.grad_r_max.max(gr[(i, j)].abs());
            m.grad_z_max = m.grad_z_max.max(gz[(i, j)].abs());
        }
    }
    m.t_mean = (st / total).clamp(m.t_min, m.t_max);
    m.grad_r_mean = sr / total;
    m.grad_z_mean = sz / total;
    m.delta_t = m.t_max - m.t_min;
    m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdRunOptions {
    /// Full-field metrics every `metrics_stride` steps; 0 disables them.
    pub metrics_stride: usize,
}

impl Default for FdRunOptions {
    fn default() -> Self {
        Self { metrics_stride: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FdTrajectory {
    pub times: Vec<f64>,
    pub outputs: Vec<[f64; 4]>,
    pub means: Vec<f64>,
    pub metric_steps: Vec<usize>,
    pub metrics: Vec<ThermalMetrics>,
    pub final_field: DMatrix<f64>,
}

/// Runs the oracle from a uniform temperature. `q` holds one sample per
/// recorded time; `u` matches it or is a single constant value.
pub fn fd_solve(
    spec: &CellSpec,
    cooling: &CoolingConfig,
    t_init: f64,
    u: &[BoundaryInput],
    q: &[f64],
    cfg: FdConfig,
    opts: FdRunOptions,
) -> Result<FdTrajectory> {
    if q.is_empty() || u.is_empty() || (u.len() != 1 && u.len() != q.len()) {
        return Err(Error::InvalidArgument("input profiles must be non-empty and aligned".into()));
    }
    let solver = FdSolver::new(spec, cooling, cfg)?;
    let mut state = solver.uniform_state(t_init);
    let steps = q.len() - 1;
    let mut tr = FdTrajectory::default();
    for k in 0..=steps {
        let uk = u[k.min(u.len() - 1)];
        let y = solver.outputs(&state);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Oracle(format!("non-finite temperature at step {k}")));
        }
        tr.times.push(k as f64 * cfg.dt);
        tr.outputs.push(y);
        tr.means.push(solver.mean(&state));
        if opts.metrics_stride > 0 && (k % opts.metrics_stride == 0 || k == steps) {
            tr.metric_steps.push(k);
            tr.metrics.push(solver.metrics(&state));
        }
        if k < steps {
            solver.step(&mut state, &uk, q[k]);
        }
    }
    tr.final_field = solver.field(&state);
    Ok(tr)
}
