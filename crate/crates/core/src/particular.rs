//! Boundary-lifting (particular) solution split into one component per side.
//!
//! The lifting lives in the space
//!
//! ```text
//! span{ phi^zeta_n } x {xi, xi^2}   (+)   span{ phi^xi_m } x {zeta, zeta^2}
//! ```
//!
//! The first part carries the surface/core inputs, the second the top/bottom
//! inputs. Each side's Robin condition is imposed in the Galerkin sense along
//! that side, which reduces to one 2x2 system per pair of opposite sides
//! times the projection of the constant 1 onto the tangential basis.
//!
//! Boundary conditions use the outward-flux convention:
//!
//! ```text
//!  h_s T + alpha k_r dT/dxi = u_s    at xi = +1,   u_s =  h_s T_s,inf
//! -h_c T + alpha k_r dT/dxi = u_c    at xi = -1,   u_c = -h_c T_c,inf
//!  h_t T + beta  k_z dT/dzeta = u_t  at zeta = +1, u_t =  h_t T_t,inf
//! -h_b T + beta  k_z dT/dzeta = u_b  at zeta = -1, u_b = -h_b T_b,inf
//! ```

use nalgebra::{DMatrix, DVector};

use crate::cell::{BoundaryInput, CellSpec, CoolingConfig, Side};
use crate::chebyshev::{BasisSet, Quadrature, RobinCondition};
use crate::error::{Error, Result};

/// Boundary operators applied to `xi, xi^2` (surface/core) and
/// `zeta, zeta^2` (top/bottom) at the corresponding ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryScalars {
    pub s1: f64,
    pub s2: f64,
    pub c1: f64,
    pub c2: f64,
    pub t1: f64,
    pub t2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl BoundaryScalars {
    /// From the four convection coefficients and the conduction terms
    /// `alpha k_r` and `beta k_z`.
    pub fn from_coefficients(h: [f64; 4], alpha_k: f64, beta_k: f64) -> Result<Self> {
        let [hs, hc, ht, hb] = h;
        let s = Self {
            s1: hs + alpha_k,
            s2: hs + 2.0 * alpha_k,
            c1: hc + alpha_k,
            c2: -hc - 2.0 * alpha_k,
            t1: ht + beta_k,
            t2: ht + 2.0 * beta_k,
            b1: hb + beta_k,
            b2: -hb - 2.0 * beta_k,
        };
        let vertical = s.s1 * s.c2 - s.s2 * s.c1;
        let vscale = (s.s1 * s.c2).abs() + (s.s2 * s.c1).abs();
        if !(vertical.abs() > 1e-12 * vscale) {
            return Err(Error::DegenerateBoundary { pair: "surface/core" });
        }
        let horizontal = s.t1 * s.b2 - s.t2 * s.b1;
        let hscale = (s.t1 * s.b2).abs() + (s.t2 * s.b1).abs();
        if !(horizontal.abs() > 1e-12 * hscale) {
            return Err(Error::DegenerateBoundary { pair: "top/bottom" });
        }
        Ok(s)
    }

    pub fn vertical_det(&self) -> f64 {
        self.s1 * self.c2 - self.s2 * self.c1
    }

    pub fn horizontal_det(&self) -> f64 {
        self.t1 * self.b2 - self.t2 * self.b1
    }

    /// Weights of `(xi, xi^2)` or `(zeta, zeta^2)` per unit input on `side`.
    pub fn unit_response(&self, side: Side) -> (f64, f64) {
        let dv = self.vertical_det();
        let dh = self.horizontal_det();
        match side {
            Side::Surface => (self.c2 / dv, -self.c1 / dv),
            Side::Core => (-self.s2 / dv, self.s1 / dv),
            Side::Top => (self.b2 / dh, -self.b1 / dh),
            Side::Bottom => (-self.t2 / dh, self.t1 / dh),
        }
    }
}

pub fn boundary_scalars(spec: &CellSpec, cooling: &CoolingConfig) -> Result<BoundaryScalars> {
    BoundaryScalars::from_coefficients(
        [
            cooling.h(Side::Surface),
            cooling.h(Side::Core),
            cooling.h(Side::Top),
            cooling.h(Side::Bottom),
        ],
        spec.xi_scale() * spec.k_radial,
        spec.zeta_scale() * spec.k_axial,
    )
}

/// Homogeneous Robin conditions `(at -1, at +1)` for the `xi` and `zeta` bases.
pub fn homogeneous_conditions(
    spec: &CellSpec,
    cooling: &CoolingConfig,
) -> ((RobinCondition, RobinCondition), (RobinCondition, RobinCondition)) {
    let ak = spec.xi_scale() * spec.k_radial;
    let bk = spec.zeta_scale() * spec.k_axial;
    (
        (
            RobinCondition::new(-cooling.h(Side::Core), ak),
            RobinCondition::new(cooling.h(Side::Surface), ak),
        ),
        (
            RobinCondition::new(-cooling.h(Side::Bottom), bk),
            RobinCondition::new(cooling.h(Side::Top), bk),
        ),
    )
}

/// Coefficient vectors of the four side components.
#[derive(Debug, Clone, PartialEq)]
pub struct SideCoefficients {
    pub d1_s: DVector<f64>,
    pub d2_s: DVector<f64>,
    pub d1_c: DVector<f64>,
    pub d2_c: DVector<f64>,
    pub d1_t: DVector<f64>,
    pub d2_t: DVector<f64>,
    pub d1_b: DVector<f64>,
    pub d2_b: DVector<f64>,
}

impl SideCoefficients {
    pub fn for_side(&self, side: Side) -> (&DVector<f64>, &DVector<f64>) {
        match side {
            Side::Surface => (&self.d1_s, &self.d2_s),
            Side::Core => (&self.d1_c, &self.d2_c),
            Side::Top => (&self.d1_t, &self.d2_t),
            Side::Bottom => (&self.d1_b, &self.d2_b),
        }
    }

    /// Combined `(D1, D2, D3, D4)` for a given input.
    pub fn combined(&self, u: &BoundaryInput) -> [DVector<f64>; 4] {
        let (us, uc, ut, ub) = (
            u.get(Side::Surface),
            u.get(Side::Core),
            u.get(Side::Top),
            u.get(Side::Bottom),
        );
        [
            &self.d1_s * us + &self.d1_c * uc,
            &self.d2_s * us + &self.d2_c * uc,
            &self.d1_t * ut + &self.d1_b * ub,
            &self.d2_t * ut + &self.d2_b * ub,
        ]
    }
}

/// Gram matrix `<phi_k, phi_l>` and load `<1, phi_l>` under `weight`.
pub(crate) fn gram_and_load(
    basis: &BasisSet,
    quad: &Quadrature,
    weight: impl Fn(f64) -> f64,
) -> (DMatrix<f64>, DVector<f64>) {
    let n = basis.count();
    let mut gram = DMatrix::zeros(n, n);
    let mut load = DVector::zeros(n);
    for (x, w) in quad.iter() {
        let v = basis.eval_all(x).value;
        let ww = w * weight(x);
        for l in 0..n {
            load[l] += ww * v[l];
            for k in 0..n {
                gram[(l, k)] += ww * v[k] * v[l];
            }
        }
    }
    (gram, load)
}

fn solve_gram(gram: DMatrix<f64>, load: &DVector<f64>, which: &str) -> Result<DVector<f64>> {
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::IllConditioned(format!("{which} Gram matrix is not positive definite")))?;
    let x = chol.solve(load);
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::IllConditioned(format!("{which} Gram solve produced non-finite values")))
    }
}

/// Solves the four boundary Galerkin systems for the per-side coefficients.
///
/// `xi_basis` has `M` functions, `zeta_basis` `N`. The `xi` inner product
/// carries the volume weight of `spec` (radius for cylinders).
pub fn solve_side_coefficients(
    spec: &CellSpec,
    xi_basis: &BasisSet,
    zeta_basis: &BasisSet,
    scalars: &BoundaryScalars,
    quad: &Quadrature,
) -> Result<SideCoefficients> {
    let (phi_v, s_v) = gram_and_load(zeta_basis, quad, |_| 1.0);
    let (phi_h, s_h) = gram_and_load(xi_basis, quad, |x| spec.volume_weight(x));
    let p_v = solve_gram(phi_v, &s_v, "vertical")?;
    let p_h = solve_gram(phi_h, &s_h, "horizontal")?;

    let pair = |side: Side, p: &DVector<f64>| {
        let (w1, w2) = scalars.unit_response(side);
        (p * w1, p * w2)
    };
    let (d1_s, d2_s) = pair(Side::Surface, &p_v);
    let (d1_c, d2_c) = pair(Side::Core, &p_v);
    let (d1_t, d2_t) = pair(Side::Top, &p_h);
    let (d1_b, d2_b) = pair(Side::Bottom, &p_h);
    Ok(SideCoefficients {
        d1_s,
        d2_s,
        d1_c,
        d2_c,
        d1_t,
        d2_t,
        d1_b,
        d2_b,
    })
}

/// Value and partial derivatives of a field at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldDerivs {
    pub value: f64,
    pub d_xi: f64,
    pub d_xixi: f64,
    pub d_zeta: f64,
    pub d_zetazeta: f64,
}

impl FieldDerivs {
    fn scaled(self, f: f64) -> Self {
        Self {
            value: self.value * f,
            d_xi: self.d_xi * f,
            d_xixi: self.d_xixi * f,
            d_zeta: self.d_zeta * f,
            d_zetazeta: self.d_zetazeta * f,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            d_xi: self.d_xi + o.d_xi,
            d_xixi: self.d_xixi + o.d_xixi,
            d_zeta: self.d_zeta + o.d_zeta,
            d_zetazeta: self.d_zetazeta + o.d_zetazeta,
        }
    }
}

/// The four per-side lifting fields, each per unit input.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticularComponents {
    spec: CellSpec,
    cooling: CoolingConfig,
    xi_basis: BasisSet,
    zeta_basis: BasisSet,
    scalars: BoundaryScalars,
    coeffs: SideCoefficients,
}

impl ParticularComponents {
    pub fn new(
        spec: &CellSpec,
        cooling: &CoolingConfig,
        xi_basis: &BasisSet,
        zeta_basis: &BasisSet,
        quad: &Quadrature,
    ) -> Result<Self> {
        let scalars = boundary_scalars(spec, cooling)?;
        let coeffs = solve_side_coefficients(spec, xi_basis, zeta_basis, &scalars, quad)?;
        Ok(Self {
            spec: *spec,
            cooling: cooling.clone(),
            xi_basis: xi_basis.clone(),
            zeta_basis: zeta_basis.clone(),
            scalars,
            coeffs,
        })
    }

    pub fn coefficients(&self) -> &SideCoefficients {
        &self.coeffs
    }

    pub fn scalars(&self) -> &BoundaryScalars {
        &self.scalars
    }

    /// Component of `side` per unit input, at scaled coordinates.
    pub fn eval_component(&self, side: Side, xi: f64, zeta: f64) -> Result<f64> {
        if xi.abs() > 1.0 + 1e-12 {
            return Err(Error::Domain { x: xi });
        }
        if zeta.abs() > 1.0 + 1e-12 {
            return Err(Error::Domain { x: zeta });
        }
        Ok(self.component_derivs(side, xi, zeta).value)
    }

    /// Full lifting field `sum_side T_p^side u_side`.
    pub fn eval_total(&self, u: &BoundaryInput, xi: f64, zeta: f64) -> Result<f64> {
        let mut acc = 0.0;
        for side in Side::ALL {
            let us = u.get(side);
            if us != 0.0 {
                acc += self.eval_component(side, xi, zeta)? * us;
            }
        }
        Ok(acc)
    }

    pub(crate) fn component_derivs(&self, side: Side, xi: f64, zeta: f64) -> FieldDerivs {
        let (d1, d2) = self.coeffs.for_side(side);
        match side {
            Side::Surface | Side::Core => {
                let b = self.zeta_basis.eval_all(zeta);
                let g = d1.iter().zip(&b.value).map(|(d, v)| d * v).sum::<f64>();
                let g2 = d2.iter().zip(&b.value).map(|(d, v)| d * v).sum::<f64>();
                let g_z = d1.iter().zip(&b.d1).map(|(d, v)| d * v).sum::<f64>();
                let g2_z = d2.iter().zip(&b.d1).map(|(d, v)| d * v).sum::<f64>();
                let g_zz = d1.iter().zip(&b.d2).map(|(d, v)| d * v).sum::<f64>();
                let g2_zz = d2.iter().zip(&b.d2).map(|(d, v)| d * v).sum::<f64>();
                FieldDerivs {
                    value: g * xi + g2 * xi * xi,
                    d_xi: g + 2.0 * g2 * xi,
                    d_xixi: 2.0 * g2,
                    d_zeta: g_z * xi + g2_z * xi * xi,
                    d_zetazeta: g_zz * xi + g2_zz * xi * xi,
                }
            }
            Side::Top | Side::Bottom => {
                let b = self.xi_basis.eval_all(xi);
                let f = d1.iter().zip(&b.value).map(|(d, v)| d * v).sum::<f64>();
                let f2 = d2.iter().zip(&b.value).map(|(d, v)| d * v).sum::<f64>();
                let f_x = d1.iter().zip(&b.d1).map(|(d, v)| d * v).sum::<f64>();
                let f2_x = d2.iter().zip(&b.d1).map(|(d, v)| d * v).sum::<f64>();
                let f_xx = d1.iter().zip(&b.d2).map(|(d, v)| d * v).sum::<f64>();
                let f2_xx = d2.iter().zip(&b.d2).map(|(d, v)| d * v).sum::<f64>();
                FieldDerivs {
                    value: f * zeta + f2 * zeta * zeta,
                    d_xi: f_x * zeta + f2_x * zeta * zeta,
                    d_xixi: f_xx * zeta + f2_xx * zeta * zeta,
                    d_zeta: f + 2.0 * f2 * zeta,
                    d_zetazeta: 2.0 * f2,
                }
            }
        }
    }

    pub(crate) fn total_derivs(&self, u: &BoundaryInput, xi: f64, zeta: f64) -> FieldDerivs {
        Side::ALL
            .iter()
            .filter(|s| u.get(**s) != 0.0)
            .fold(FieldDerivs::default(), |acc, s| {
                acc.add(self.component_derivs(*s, xi, zeta).scaled(u.get(*s)))
            })
    }

    /// Galerkin residuals of the four boundary conditions for input `u`,
    /// ordered surface, core, top, bottom. Surface/core residuals are tested
    /// against the `zeta` basis, top/bottom against the weighted `xi` basis.
    pub fn boundary_residuals(&self, u: &BoundaryInput, quad: &Quadrature) -> [DVector<f64>; 4] {
        let ak = self.spec.xi_scale() * self.spec.k_radial;
        let bk = self.spec.zeta_scale() * self.spec.k_axial;
        let c = &self.cooling;
        let n = self.zeta_basis.count();
        let m = self.xi_basis.count();
        let mut rs = DVector::zeros(n);
        let mut rc = DVector::zeros(n);
        let mut rt = DVector::zeros(m);
        let mut rb = DVector::zeros(m);
        for (x, w) in quad.iter() {
            let phi_z = self.zeta_basis.eval_all(x).value;
            let plus = self.total_derivs(u, 1.0, x);
            let minus = self.total_derivs(u, -1.0, x);
            let res_s = c.h(Side::Surface) * plus.value + ak * plus.d_xi - u.get(Side::Surface);
            let res_c = -c.h(Side::Core) * minus.value + ak * minus.d_xi - u.get(Side::Core);
            for i in 0..n {
                rs[i] += w * res_s * phi_z[i];
                rc[i] += w * res_c * phi_z[i];
            }
            let phi_x = self.xi_basis.eval_all(x).value;
            let ww = w * self.spec.volume_weight(x);
            let top = self.total_derivs(u, x, 1.0);
            let bot = self.total_derivs(u, x, -1.0);
            let res_t = c.h(Side::Top) * top.value + bk * top.d_zeta - u.get(Side::Top);
            let res_b = -c.h(Side::Bottom) * bot.value + bk * bot.d_zeta - u.get(Side::Bottom);
            for j in 0..m {
                rt[j] += ww * res_t * phi_x[j];
                rb[j] += ww * res_b * phi_x[j];
            }
        }
        [rs, rc, rt, rb]
    }
}

/// Direct-feedthrough matrix: entry `(i, j)` is the component of
/// `input_sides[j]` evaluated at `locations[i]`.
pub fn feedthrough_matrix(
    components: &ParticularComponents,
    locations: &[(f64, f64)],
    input_sides: &[Side],
) -> Result<DMatrix<f64>> {
    let mut d = DMatrix::zeros(locations.len(), input_sides.len());
    for (i, &(xi, zeta)) in locations.iter().enumerate() {
        for (j, side) in input_sides.iter().enumerate() {
            d[(i, j)] = components.eval_component(*side, xi, zeta)?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::{Scenario, Shape};
    use crate::chebyshev::{build_basis, default_quadrature_order, gauss_quadrature};

    fn components(spec: &CellSpec, cooling: &CoolingConfig, count: usize) -> (ParticularComponents, Quadrature) {
        let ((xm, xp), (zm, zp)) = homogeneous_conditions(spec, cooling);
        let bx = build_basis(count, xm, xp).unwrap();
        let bz = build_basis(count, zm, zp).unwrap();
        let quad = gauss_quadrature(default_quadrature_order(count + 1)).unwrap();
        (ParticularComponents::new(spec, cooling, &bx, &bz, &quad).unwrap(), quad)
    }

    #[test]
    fn scalars_with_adiabatic_core() {
        let spec = CellSpec::lfp_45ah();
        let cooling = Scenario::Sc.cooling(Shape::Cylindrical, 15.0);
        let s = boundary_scalars(&spec, &cooling).unwrap();
        let ak = 2.0 / 0.028 * 0.67;
        assert!((s.c1 - ak).abs() < 1e-12);
        assert!((s.c2 + 2.0 * ak).abs() < 1e-12);
        // 400 + 47.857142857... and 400 + 95.714285714...
        assert!((s.s1 - 447.857_142_857_142_8).abs() < 1e-9);
        assert!((s.s2 - 495.714_285_714_285_7).abs() < 1e-9);
        let bk = 2.0 / 0.198 * 66.6;
        assert!((s.t1 - (30.0 + bk)).abs() < 1e-9);
        assert!((s.b2 - (-30.0 - 2.0 * bk)).abs() < 1e-9);
    }

    #[test]
    fn equal_tab_coefficients_mirror() {
        for h in [0.0, 30.0, 400.0] {
            let s = BoundaryScalars::from_coefficients([10.0, 0.0, h, h], 5.0, 7.0).unwrap();
            assert_eq!(s.t1, s.b1);
            assert!((s.t2 + s.b2).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        // With outward-flux conditions the determinant only vanishes for
        // negative coefficients: -2 hs hc - 3a(hs + hc) - 4a^2 = 0.
        let a = 1.0;
        let hs = -1.0;
        let hc = -(3.0 * a * hs + 4.0 * a * a) / (2.0 * hs + 3.0 * a);
        assert_eq!(
            BoundaryScalars::from_coefficients([hs, hc, 1.0, 1.0], a, 1.0),
            Err(Error::DegenerateBoundary { pair: "surface/core" })
        );
        assert_eq!(
            BoundaryScalars::from_coefficients([1.0, 1.0, hs, hc], 1.0, a),
            Err(Error::DegenerateBoundary { pair: "top/bottom" })
        );
    }

    #[test]
    fn zero_input_gives_zero_lifting() {
        let spec = CellSpec::lfp_45ah();
        let cooling = Scenario::ATsc.cooling(Shape::Cylindrical, 15.0);
        let (p, _) = components(&spec, &cooling, 3);
        let d = p.coefficients().combined(&BoundaryInput::zero());
        assert!(d.iter().all(|v| v.iter().all(|x| *x == 0.0)));
        for (x, z) in [(0.3, -0.2), (1.0, 1.0), (-1.0, 0.5)] {
            assert_eq!(p.eval_total(&BoundaryInput::zero(), x, z).unwrap(), 0.0);
        }
    }

    #[test]
    fn components_vanish_on_their_axes() {
        let spec = CellSpec::lfp_45ah();
        let cooling = Scenario::BtTc.cooling(Shape::Cylindrical, 15.0);
        let (p, _) = components(&spec, &cooling, 4);
        for z in [-1.0, -0.4, 0.0, 0.9] {
            assert_eq!(p.eval_component(Side::Surface, 0.0, z).unwrap(), 0.0);
        }
        for x in [-1.0, 0.2, 1.0] {
            assert_eq!(p.eval_component(Side::Top, x, 0.0).unwrap(), 0.0);
        }
        assert!(p.eval_component(Side::Top, 1.5, 0.0).is_err());
    }

    #[test]
    fn boundary_galerkin_systems_hold() {
        let spec = CellSpec::lfp_45ah();
        let cooling = Scenario::Sc.cooling(Shape::Cylindrical, 15.0);
        let (p, quad) = components(&spec, &cooling, 2);
        let u = cooling.inputs();
        let res = p.boundary_residuals(&u, &quad);
        // Scale: |u| times the load vector size.
        let scale = 400.0 * 15.0 * 2.0;
        for r in &res {
            assert!(r.amax() <= 1e-9 * scale, "{r}");
        }
    }

    #[test]
    fn unit_surface_input_projects_onto_surface_condition() {
        let spec = CellSpec::lfp_45ah();
        let cooling = Scenario::Sc.cooling(Shape::Cylindrical, 15.0);
        let (p, quad) = components(&spec, &cooling, 5);
        let res = p.boundary_residuals(&BoundaryInput::unit(Side::Surface), &quad);
        for r in &res {
            assert!(r.amax() <= 1e-9, "{r}");
        }
    }

    #[test]
    fn output_feedthrough_shape_and_dominance() {
        let spec = CellSpec::lfp_45ah();
        let cooling = Scenario::BtTc.cooling(Shape::Cylindrical, 15.0);
        let (p, _) = components(&spec, &cooling, 3);
        let sides = Side::inputs_for(Shape::Cylindrical);
        let locs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)];
        let d = feedthrough_matrix(&p, &locs, &sides).unwrap();
        assert_eq!((d.nrows(), d.ncols()), (4, 3));
        let row = d.row(2);
        let top = row[1].abs();
        assert!(top > row[0].abs() && top > row[2].abs(), "{row}");
    }
}
