//! Assembly of the reduced state-space model
//!
//! ```text
//! G dX/dt = A X + B u + F w,     Y = C X + D u
//! ```
//!
//! The state stacks the homogeneous coefficients `c_mn` row-major,
//! `X[m * N + n]`, with `m` indexing the `xi` basis and `n` the `zeta` basis.
//! Test functions are the same products `phi_i(xi) phi_j(zeta)`, and every
//! inner product carries the volume weight `w(xi)`.

use nalgebra::{DMatrix, DVector};

use crate::cell::{BoundaryInput, CellSpec, CoolingConfig, Shape, Side};
use crate::chebyshev::{build_basis, default_quadrature_order, gauss_quadrature, BasisSet, Quadrature};
use crate::error::{Error, Result};
use crate::particular::{homogeneous_conditions, FieldDerivs, ParticularComponents};

/// Scaled coordinates of the four measured temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputSpec;

impl OutputSpec {
    /// Mid-points of the surface, core, top and bottom sides.
    pub const LOCATIONS: [(f64, f64); 4] = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)];
    pub const SIDES: [Side; 4] = [Side::Surface, Side::Core, Side::Top, Side::Bottom];
}

const ACCURACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedModel {
    pub m: usize,
    pub n: usize,
    pub g: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub f: DVector<f64>,
    pub c: DMatrix<f64>,
    pub dft: DMatrix<f64>,
    pub xi_basis: BasisSet,
    pub zeta_basis: BasisSet,
    pub particular: ParticularComponents,
    pub spec: CellSpec,
    pub cooling: CoolingConfig,
    pub input_sides: Vec<Side>,
    quad: Quadrature,
}

impl ReducedModel {
    /// Model order `M * N`.
    pub fn order(&self) -> usize {
        self.m * self.n
    }

    pub fn shape(&self) -> Shape {
        self.spec.shape()
    }

    pub fn n_inputs(&self) -> usize {
        self.input_sides.len()
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    /// Input vector in the column order of `B`.
    pub fn input_vector(&self, u: &BoundaryInput) -> DVector<f64> {
        DVector::from_vec(u.to_vec(&self.input_sides))
    }

    /// `Y = C X + D u`: surface, core, top and bottom mid-point temperatures.
    pub fn outputs(&self, x: &DVector<f64>, u: &BoundaryInput) -> DVector<f64> {
        &self.c * x + &self.dft * self.input_vector(u)
    }

    /// Total field and its partial derivatives in scaled coordinates.
    pub fn field_derivs(&self, x: &DVector<f64>, u: &BoundaryInput, xi: f64, zeta: f64) -> FieldDerivs {
        let bx = self.xi_basis.eval_all(xi);
        let bz = self.zeta_basis.eval_all(zeta);
        let mut out = self.particular.total_derivs(u, xi, zeta);
        for m in 0..self.m {
            for n in 0..self.n {
                let c = x[m * self.n + n];
                if c == 0.0 {
                    continue;
                }
                out.value += c * bx.value[m] * bz.value[n];
                out.d_xi += c * bx.d1[m] * bz.value[n];
                out.d_xixi += c * bx.d2[m] * bz.value[n];
                out.d_zeta += c * bx.value[m] * bz.d1[n];
                out.d_zetazeta += c * bx.value[m] * bz.d2[n];
            }
        }
        out
    }

    pub fn field_at(&self, x: &DVector<f64>, u: &BoundaryInput, xi: f64, zeta: f64) -> Result<f64> {
        for v in [xi, zeta] {
            if v.abs() > 1.0 + 1e-12 {
                return Err(Error::Domain { x: v });
            }
        }
        Ok(self.field_derivs(x, u, xi, zeta).value)
    }
}

struct Assembled {
    g: DMatrix<f64>,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    f: DVector<f64>,
}

fn assemble_at(
    spec: &CellSpec,
    xb: &BasisSet,
    zb: &BasisSet,
    particular: &ParticularComponents,
    input_sides: &[Side],
    quad: &Quadrature,
) -> Assembled {
    let (m, n) = (xb.count(), zb.count());
    let ak2 = spec.xi_scale().powi(2) * spec.k_radial;
    let bk2 = spec.zeta_scale().powi(2) * spec.k_axial;

    // One-dimensional factors of the separable integrals.
    let mut x0 = DMatrix::zeros(m, m);
    let mut xop = DMatrix::zeros(m, m);
    let mut fx = DVector::zeros(m);
    let mut z0 = DMatrix::zeros(n, n);
    let mut z2 = DMatrix::zeros(n, n);
    let mut fz = DVector::zeros(n);
    let xvals: Vec<_> = quad.nodes().iter().map(|&x| xb.eval_all(x)).collect();
    let zvals: Vec<_> = quad.nodes().iter().map(|&z| zb.eval_all(z)).collect();
    for (q, (x, wq)) in quad.iter().enumerate() {
        let w = wq * spec.volume_weight(x);
        let gamma = spec.gamma(x);
        let v = &xvals[q];
        for i in 0..m {
            fx[i] += w * v.value[i];
            for k in 0..m {
                x0[(i, k)] += w * v.value[k] * v.value[i];
                xop[(i, k)] += w * (ak2 * v.d2[k] + gamma * v.d1[k]) * v.value[i];
            }
        }
        let v = &zvals[q];
        for j in 0..n {
            fz[j] += wq * v.value[j];
            for l in 0..n {
                z0[(j, l)] += wq * v.value[l] * v.value[j];
                z2[(j, l)] += wq * v.d2[l] * v.value[j];
            }
        }
    }
    let g = x0.kronecker(&z0) * spec.volumetric_heat_capacity();
    let a = xop.kronecker(&z0) + x0.kronecker(&z2) * bk2;
    let f = fx.kronecker(&fz);

    // B: the spatial operator applied to each side's lifting component.
    let gamma_at: Vec<f64> = quad.nodes().iter().map(|&x| spec.gamma(x)).collect();
    let mut b = DMatrix::zeros(m * n, input_sides.len());
    for (col, side) in input_sides.iter().enumerate() {
        for (qx, (x, wx)) in quad.iter().enumerate() {
            let wxw = wx * spec.volume_weight(x);
            for (qz, (z, wz)) in quad.iter().enumerate() {
                let d = particular.component_derivs(*side, x, z);
                let lt = ak2 * d.d_xixi + gamma_at[qx] * d.d_xi + bk2 * d.d_zetazeta;
                let s = wxw * wz * lt;
                if s == 0.0 {
                    continue;
                }
                for i in 0..m {
                    let si = s * xvals[qx].value[i];
                    for j in 0..n {
                        b[(i * n + j, col)] += si * zvals[qz].value[j];
                    }
                }
            }
        }
    }
    Assembled { g, a, b, f }
}

fn relative_change(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = a.amax().max(b.amax());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).amax() / scale
    }
}

/// Builds bases, particular components and all model matrices.
pub fn assemble(spec: &CellSpec, cooling: &CoolingConfig, m: usize, n: usize) -> Result<ReducedModel> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!("basis counts must be >= 1, got M={m}, N={n}")));
    }
    spec.validate()?;
    let shape = spec.shape();
    cooling.validate_for(shape)?;

    let ((xm, xp), (zm, zp)) = homogeneous_conditions(spec, cooling);
    let xb = build_basis(m, xm, xp)?;
    let zb = build_basis(n, zm, zp)?;
    let order = default_quadrature_order(m.max(n) + 1);
    let quad = gauss_quadrature(order)?;
    let fine = gauss_quadrature(2 * order)?;
    let particular = ParticularComponents::new(spec, cooling, &xb, &zb, &quad)?;
    let input_sides = Side::inputs_for(shape);

    let coarse = assemble_at(spec, &xb, &zb, &particular, &input_sides, &quad);
    let check = assemble_at(spec, &xb, &zb, &particular, &input_sides, &fine);
    let deviation = [
        relative_change(&coarse.g, &check.g),
        relative_change(&coarse.a, &check.a),
        relative_change(&coarse.b, &check.b),
        relative_change(&DMatrix::from_column_slice(coarse.f.len(), 1, coarse.f.as_slice()),
                        &DMatrix::from_column_slice(check.f.len(), 1, check.f.as_slice())),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if !(deviation <= ACCURACY_TOL) {
        return Err(Error::AssemblyAccuracy { deviation });
    }
    let Assembled { g, a, b, f } = coarse;
    if g.clone().cholesky().is_none() {
        return Err(Error::SingularMatrix("mass matrix G"));
    }
    if [&g, &a, &b].iter().any(|mat| mat.iter().any(|v| !v.is_finite())) {
        return Err(Error::IllConditioned("non-finite model matrix".into()));
    }

    let mut c = DMatrix::zeros(OutputSpec::LOCATIONS.len(), m * n);
    for (row, &(x, z)) in OutputSpec::LOCATIONS.iter().enumerate() {
        let vx = xb.eval_all(x).value;
        let vz = zb.eval_all(z).value;
        for i in 0..m {
            for j in 0..n {
                c[(row, i * n + j)] = vx[i] * vz[j];
            }
        }
    }
    let dft = crate::particular::feedthrough_matrix(&particular, &OutputSpec::LOCATIONS, &input_sides)?;

    Ok(ReducedModel {
        m,
        n,
        g,
        a,
        b,
        f,
        c,
        dft,
        xi_basis: xb,
        zeta_basis: zb,
        particular,
        spec: *spec,
        cooling: cooling.clone(),
        input_sides,
        quad,
    })
}

/// Galerkin projection of `T_init - T_p u0` onto the homogeneous space.
pub fn project_initial_state(model: &ReducedModel, t_init: f64, u0: &BoundaryInput) -> Result<DVector<f64>> {
    let (m, n) = (model.m, model.n);
    let rc = model.spec.volumetric_heat_capacity();
    let mut rhs = DVector::zeros(m * n);
    let quad = &model.quad;
    let zvals: Vec<_> = quad.nodes().iter().map(|&z| model.zeta_basis.eval_all(z).value).collect();
    for (x, wx) in quad.iter() {
        let vx = model.xi_basis.eval_all(x).value;
        let wxw = wx * model.spec.volume_weight(x);
        for (qz, (z, wz)) in quad.iter().enumerate() {
            let target = t_init - model.particular.total_derivs(u0, x, z).value;
            let s = rc * wxw * wz * target;
            for i in 0..m {
                for j in 0..n {
                    rhs[i * n + j] += s * vx[i] * zvals[qz][j];
                }
            }
        }
    }
    let chol = model
        .g
        .clone()
        .cholesky()
        .ok_or(Error::SingularMatrix("mass matrix G"))?;
    Ok(chol.solve(&rhs))
}

/// Steady state `A X = -(B u + F w)` for constant inputs.
pub fn steady_state(model: &ReducedModel, u: &BoundaryInput, w: f64) -> Result<DVector<f64>> {
    let rhs = -(&model.b * model.input_vector(u) + &model.f * w);
    let x = model
        .a
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularMatrix("stiffness matrix A"))?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::SingularMatrix("stiffness matrix A"))
    }
}

/// Re-runs basis construction and assembly for a new cooling configuration.
pub fn reassemble_cooling(model: &ReducedModel, cooling: &CoolingConfig) -> Result<ReducedModel> {
    assemble(&model.spec, cooling, model.m, model.n)
}
