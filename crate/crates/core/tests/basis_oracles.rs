mod common;

use common::adaptive_simpson;
use proptest::prelude::*;
use spectherm::cell::{CellSpec, Scenario, Shape, Side};
use spectherm::chebyshev::{
    build_basis, cheb_deriv_at_endpoints, cheb_eval, default_quadrature_order, gauss_quadrature, inner_product_1d,
    RobinCondition,
};
use spectherm::particular::homogeneous_conditions;

#[test]
fn recurrence_matches_trigonometric_form() {
    for k in 0..20 {
        for &x in &[-1.0, -0.77, -0.2, 0.0, 0.123, 0.5, 0.99, 1.0] {
            let expected = (k as f64 * f64::acos(x)).cos();
            assert!((cheb_eval(k, x).unwrap() - expected).abs() < 1e-12, "k={k} x={x}");
        }
    }
    assert_eq!(cheb_eval(3, 0.5).unwrap(), -1.0);
    assert!(cheb_eval(2, 1.5).is_err());
}

#[test]
fn endpoint_derivative_matches_one_sided_difference() {
    let h = 1e-7;
    for k in [3usize, 5, 8] {
        let (minus, plus) = cheb_deriv_at_endpoints(k);
        let fd_plus = (cheb_eval(k, 1.0).unwrap() - cheb_eval(k, 1.0 - h).unwrap()) / h;
        let fd_minus = (cheb_eval(k, -1.0 + h).unwrap() - cheb_eval(k, -1.0).unwrap()) / h;
        let scale = (k * k) as f64;
        assert!((plus - fd_plus).abs() < 1e-3 * scale, "k={k}");
        assert!((minus - fd_minus).abs() < 1e-3 * scale, "k={k}");
    }
    assert_eq!(cheb_deriv_at_endpoints(5), (25.0, 25.0));
}

#[test]
fn chebyshev_orthogonality_under_chebyshev_gauss_rule() {
    // Chebyshev-Gauss nodes x_j = cos((2j+1) pi / 2n), equal weights pi/n.
    let n = 40;
    let nodes: Vec<f64> = (0..n)
        .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect();
    for a in 0..=12 {
        for b in 0..=12 {
            let s: f64 = nodes
                .iter()
                .map(|&x| cheb_eval(a, x).unwrap() * cheb_eval(b, x).unwrap())
                .sum::<f64>()
                * std::f64::consts::PI
                / n as f64;
            let expected = match (a, b) {
                (0, 0) => std::f64::consts::PI,
                _ if a == b => std::f64::consts::FRAC_PI_2,
                _ => 0.0,
            };
            assert!((s - expected).abs() < 1e-12, "{a} {b}: {s}");
        }
    }
}

#[test]
fn every_scenario_basis_satisfies_both_conditions() {
    let spec = CellSpec::lfp_45ah();
    for shape in [Shape::Cylindrical, Shape::Pouch] {
        let spec = if shape == Shape::Pouch {
            CellSpec::pouch(0.2, 0.01, 2118.0, 795.0, 0.67, 66.6).unwrap()
        } else {
            spec
        };
        for sc in Scenario::ALL {
            let cooling = sc.cooling(shape, 15.0);
            let ((xm, xp), (zm, zp)) = homogeneous_conditions(&spec, &cooling);
            for (m, p) in [(xm, xp), (zm, zp)] {
                let b = build_basis(11, m, p).unwrap();
                for k in 0..=10 {
                    let (rm, rp) = b.robin_residuals(k);
                    assert!(rm.abs() <= 1e-10 && rp.abs() <= 1e-10, "{} k={k}: {rm} {rp}", sc.name());
                }
            }
        }
    }
}

#[test]
fn neumann_basis_has_flat_ends() {
    let b = build_basis(7, RobinCondition::neumann(), RobinCondition::neumann()).unwrap();
    for k in 1..=6 {
        for x in [-1.0, 1.0] {
            assert!(b.basis_deriv1(k, x).unwrap().abs() <= 1e-10);
        }
    }
}

#[test]
fn dirichlet_basis_vanishes_at_ends() {
    let b = build_basis(8, RobinCondition::dirichlet(), RobinCondition::dirichlet()).unwrap();
    for k in 0..8 {
        assert_eq!(b.combos()[k], (0.0, -1.0));
        assert!(b.basis_eval(k, 1.0).unwrap().abs() < 1e-14);
        assert!(b.basis_eval(k, -1.0).unwrap().abs() < 1e-14);
    }
}

#[test]
fn rational_integrand_matches_adaptive_oracle() {
    let spec = CellSpec::lfp_45ah();
    let c = spec.xi_scale() * 0.004 + 1e-3;
    let f = |x: f64| 1.0 / (1.0 + x + c);
    let q = gauss_quadrature(32).unwrap().integrate(f);
    let oracle = adaptive_simpson(&f, -1.0, 1.0, 1e-15);
    assert!((q - oracle).abs() < 1e-12, "{q} {oracle}");
    assert!((oracle - ((2.0 + c) / c).ln()).abs() < 1e-11);
}

#[test]
fn weighted_basis_inner_product_matches_adaptive_oracle() {
    let spec = CellSpec::lfp_45ah();
    let cooling = Scenario::Sc.cooling(Shape::Cylindrical, 15.0);
    let ((m, p), _) = homogeneous_conditions(&spec, &cooling);
    let b = build_basis(3, m, p).unwrap();
    let quad = gauss_quadrature(default_quadrature_order(b.max_degree())).unwrap();
    let phi = |x: f64| b.basis_eval(1, x).unwrap();
    let got = inner_product_1d(phi, phi, |x| spec.volume_weight(x), &quad);
    let oracle = adaptive_simpson(&|x| spec.volume_weight(x) * phi(x) * phi(x), -1.0, 1.0, 1e-14);
    assert!((got - oracle).abs() <= 1e-10 * oracle.abs().max(1.0), "{got} {oracle}");
}

#[test]
fn weights_sum_to_two_for_all_orders() {
    for n in 1..=64 {
        let q = gauss_quadrature(n).unwrap();
        assert!((q.weights().iter().sum::<f64>() - 2.0).abs() < 1e-13, "order {n}");
        assert!(q.weights().iter().all(|w| *w > 0.0));
    }
}

proptest! {
    #[test]
    fn robin_residuals_vanish_for_random_conditions(
        hm in 0.0f64..2000.0,
        hp in 0.0f64..2000.0,
        a in 1.0f64..2000.0,
        count in 1usize..12,
    ) {
        // Outward-flux conditions: -h T + a T' at -1, h T + a T' at +1.
        let b = build_basis(count, RobinCondition::new(-hm, a), RobinCondition::new(hp, a)).unwrap();
        for k in 0..count {
            let (rm, rp) = b.robin_residuals(k);
            prop_assert!(rm.abs() <= 1e-10 && rp.abs() <= 1e-10);
        }
    }

    #[test]
    fn derivatives_match_finite_differences(x in -0.95f64..0.95, k in 0usize..8, h in 0.0f64..800.0) {
        let spec = CellSpec::lfp_45ah();
        let ak = spec.xi_scale() * spec.k_radial;
        let b = build_basis(8, RobinCondition::new(0.0, ak), RobinCondition::new(h, ak)).unwrap();
        let e = 1e-5;
        let f = |x: f64| b.basis_eval(k, x).unwrap();
        let d1 = (f(x + e) - f(x - e)) / (2.0 * e);
        let d2 = (f(x + e) - 2.0 * f(x) + f(x - e)) / (e * e);
        let g1 = b.basis_deriv1(k, x).unwrap();
        let g2 = b.basis_deriv2(k, x).unwrap();
        let s1 = 1.0 + g1.abs() + (k * k) as f64;
        let s2 = 1.0 + g2.abs() + (k * k * k * k) as f64;
        prop_assert!((d1 - g1).abs() <= 1e-6 * s1);
        prop_assert!((d2 - g2).abs() <= 1e-4 * s2);
    }

    #[test]
    fn gauss_rule_exact_for_monomials(n in 1usize..30, frac in 0.0f64..1.0) {
        let q = gauss_quadrature(n).unwrap();
        let deg = ((2 * n - 1) as f64 * frac).round() as i32;
        let got = q.integrate(|x| x.powi(deg));
        let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
        prop_assert!((got - exact).abs() <= 1e-13 * exact.abs().max(1.0));
    }
}

#[test]
fn surface_side_label_matches_shape() {
    assert_ne!(Side::Surface.label(Shape::Cylindrical), Side::Surface.label(Shape::Pouch));
}
