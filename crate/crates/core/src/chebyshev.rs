//! Chebyshev polynomials, Robin-compatible compact bases and Gauss-Legendre
//! quadrature on `[-1, 1]`.
//!
//! A basis function is a compact combination of three neighbouring
//! polynomials of the first kind,
//!
//! ```text
//! phi_k = P_k + a_k P_{k+1} + b_k P_{k+2},   k = 0, 1, ..., count - 1
//! ```
//!
//! with `(a_k, b_k)` chosen so that `phi_k` satisfies a homogeneous Robin
//! condition at each end of the interval.

use crate::error::{Error, Result};

const DOMAIN_SLACK: f64 = 1e-12;

fn check_domain(x: f64) -> Result<()> {
    if x.abs() <= 1.0 + DOMAIN_SLACK {
        Ok(())
    } else {
        Err(Error::Domain { x })
    }
}

/// `P_k(x) = cos(k arccos x)` by the three-term recurrence.
pub fn cheb_eval(k: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(cheb_values(k, x)[k])
}

/// `P_0(x) ..= P_kmax(x)`.
pub(crate) fn cheb_values(kmax: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(1.0);
    if kmax >= 1 {
        p.push(x);
    }
    for j in 2..=kmax {
        p.push(2.0 * x * p[j - 1] - p[j - 2]);
    }
    p
}

/// Values, first and second derivatives of `P_0 ..= P_kmax` at `x`.
///
/// Differentiating `P_{j+1} = 2x P_j - P_{j-1}` gives recurrences for the
/// derivatives that stay regular at the endpoints.
pub(crate) fn cheb_with_derivs(kmax: usize, x: f64) -> [Vec<f64>; 3] {
    let n = kmax + 1;
    let mut p = vec![0.0; n.max(2)];
    let mut d1 = vec![0.0; n.max(2)];
    let mut d2 = vec![0.0; n.max(2)];
    p[0] = 1.0;
    p[1] = x;
    d1[1] = 1.0;
    for j in 1..kmax {
        p[j + 1] = 2.0 * x * p[j] - p[j - 1];
        d1[j + 1] = 2.0 * p[j] + 2.0 * x * d1[j] - d1[j - 1];
        d2[j + 1] = 4.0 * d1[j] + 2.0 * x * d2[j] - d2[j - 1];
    }
    p.truncate(n);
    d1.truncate(n);
    d2.truncate(n);
    [p, d1, d2]
}

/// `(P'_k(-1), P'_k(+1)) = ((-1)^{k+1} k^2, k^2)`.
pub fn cheb_deriv_at_endpoints(k: usize) -> (f64, f64) {
    let k2 = (k * k) as f64;
    let minus = if k % 2 == 0 { -k2 } else { k2 };
    (minus, k2)
}

fn cheb_at_endpoint(k: usize, plus: bool) -> f64 {
    if plus || k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Homogeneous Robin condition `value * phi(x0) + deriv * phi'(x0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinCondition {
    pub value: f64,
    pub deriv: f64,
}

impl RobinCondition {
    pub fn new(value: f64, deriv: f64) -> Self {
        Self { value, deriv }
    }

    pub fn dirichlet() -> Self {
        Self::new(1.0, 0.0)
    }

    pub fn neumann() -> Self {
        Self::new(0.0, 1.0)
    }

    fn apply_to_poly(&self, k: usize, plus: bool) -> f64 {
        let (dm, dp) = cheb_deriv_at_endpoints(k);
        let d = if plus { dp } else { dm };
        self.value * cheb_at_endpoint(k, plus) + self.deriv * d
    }

    /// Residual of the condition for an arbitrary value/derivative pair.
    pub fn residual(&self, value: f64, deriv: f64) -> f64 {
        self.value * value + self.deriv * deriv
    }
}

/// Compact Chebyshev basis satisfying Robin conditions at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    minus: RobinCondition,
    plus: RobinCondition,
    combos: Vec<(f64, f64)>,
}

/// Solves the per-index 2x2 systems for the combination coefficients.
pub fn build_basis(count: usize, minus: RobinCondition, plus: RobinCondition) -> Result<BasisSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("basis needs at least one function".into()));
    }
    let mut combos = Vec::with_capacity(count);
    for k in 0..count {
        // Rows: condition at -1 and at +1; columns: coefficients of P_{k+1}, P_{k+2}.
        let m11 = minus.apply_to_poly(k + 1, false);
        let m12 = minus.apply_to_poly(k + 2, false);
        let m21 = plus.apply_to_poly(k + 1, true);
        let m22 = plus.apply_to_poly(k + 2, true);
        let r1 = -minus.apply_to_poly(k, false);
        let r2 = -plus.apply_to_poly(k, true);
        let det = m11 * m22 - m12 * m21;
        let scale = (m11.abs() + m12.abs()) * (m21.abs() + m22.abs());
        if !(det.abs() > 1e-12 * scale) {
            return Err(Error::BasisConstruction { index: k });
        }
        let a = (r1 * m22 - m12 * r2) / det;
        let b = (m11 * r2 - r1 * m21) / det;
        combos.push((a, b));
    }
    Ok(BasisSet { minus, plus, combos })
}

impl BasisSet {
    pub fn count(&self) -> usize {
        self.combos.len()
    }

    pub fn robin_minus(&self) -> RobinCondition {
        self.minus
    }

    pub fn robin_plus(&self) -> RobinCondition {
        self.plus
    }

    /// `(a_k, b_k)` of every basis function.
    pub fn combos(&self) -> &[(f64, f64)] {
        &self.combos
    }

    /// Highest polynomial degree in the set.
    pub fn max_degree(&self) -> usize {
        self.count() + 1
    }

    fn combine(&self, k: usize, p: &[f64]) -> f64 {
        let (a, b) = self.combos[k];
        p[k] + a * p[k + 1] + b * p[k + 2]
    }

    pub fn basis_eval(&self, k: usize, x: f64) -> Result<f64> {
        check_domain(x)?;
        Ok(self.combine(k, &cheb_values(k + 2, x)))
    }

    pub fn basis_deriv1(&self, k: usize, x: f64) -> Result<f64> {
        check_domain(x)?;
        Ok(self.combine(k, &cheb_with_derivs(k + 2, x)[1]))
    }

    pub fn basis_deriv2(&self, k: usize, x: f64) -> Result<f64> {
        check_domain(x)?;
        Ok(self.combine(k, &cheb_with_derivs(k + 2, x)[2]))
    }

    /// Values, first and second derivatives of every basis function at `x`.
    /// No domain check.
    pub(crate) fn eval_all(&self, x: f64) -> BasisValues {
        let [p, d1, d2] = cheb_with_derivs(self.max_degree(), x);
        let n = self.count();
        let mut out = BasisValues {
            value: Vec::with_capacity(n),
            d1: Vec::with_capacity(n),
            d2: Vec::with_capacity(n),
        };
        for k in 0..n {
            out.value.push(self.combine(k, &p));
            out.d1.push(self.combine(k, &d1));
            out.d2.push(self.combine(k, &d2));
        }
        out
    }

    /// Scaled residuals of both Robin conditions for `phi_k`, as
    /// `(at -1, at +1)`, divided by `1 + |a_k| + |b_k|`.
    pub fn robin_residuals(&self, k: usize) -> (f64, f64) {
        let (a, b) = self.combos[k];
        let scale = 1.0 + a.abs() + b.abs();
        let [p_m, d_m, _] = cheb_with_derivs(k + 2, -1.0);
        let [p_p, d_p, _] = cheb_with_derivs(k + 2, 1.0);
        let rm = self.minus.residual(self.combine(k, &p_m), self.combine(k, &d_m));
        let rp = self.plus.residual(self.combine(k, &p_p), self.combine(k, &d_p));
        (rm / scale, rp / scale)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BasisValues {
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Legendre polynomial `L_n(x)` and its derivative.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights of the given order (Newton iteration on
/// the Legendre recurrence, seeded with the Chebyshev-like asymptotic guess).
pub fn gauss_quadrature(order: usize) -> Result<Quadrature> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pi = std::f64::consts::PI;
    for i in 0..n.div_ceil(2) {
        let mut x = (pi * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(Quadrature { nodes, weights })
}

/// `sum_i w_i weight(x_i) f(x_i) g(x_i)`.
pub fn inner_product_1d(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    weight: impl Fn(f64) -> f64,
    quad: &Quadrature,
) -> f64 {
    quad.iter().map(|(x, w)| w * weight(x) * f(x) * g(x)).sum()
}

/// Default quadrature order for bases up to `max_degree`.
pub fn default_quadrature_order(max_degree: usize) -> usize {
    4 * (max_degree + 2)
}
