use std::f64::consts::PI;

use gapfield::geometry::{BipolarPoint, Branch, CartesianPoint, DiskPairGeometry};
use gapfield::series::{
    coefficients, coefficients_perfect, evaluate_u, evaluate_u_infinity, ConductivityPair, FieldSolver, HarmonicDrive,
};
use gapfield::singular::{infinity_gap, theta_grid_with_zero};
use gapfield::stats::log_log_slope;

const X: HarmonicDrive = HarmonicDrive::new(1.0, 0.0);

fn geom() -> DiskPairGeometry {
    DiskPairGeometry::new(3.0, 2.0, 0.01).unwrap()
}

/// Worst continuity error and worst relative flux mismatch over 32
/// θ-samples on each boundary.
fn transmission_errors(s: &FieldSolver) -> (f64, f64) {
    let g = s.geometry();
    let (k1, k2) = (s.conductivity().k1.value(), s.conductivity().k2.value());
    let (mut cont, mut flux): (f64, f64) = (0.0, 0.0);
    for (j, inside, k) in [(1, Branch::Inside1, k1), (2, Branch::Inside2, k2)] {
        for i in 0..32 {
            let theta = -PI + 2.0 * PI * (i as f64 + 0.5) / 32.0;
            let bp = BipolarPoint::new(g.boundary_level(j), theta);
            let (nu, _) = g.level_circle_frame(bp);
            let out = s.evaluate_bipolar(bp, Branch::Exterior).unwrap();
            let inn = s.evaluate_bipolar(bp, inside).unwrap();
            cont = cont.max((out.u - inn.u).abs());
            let (dn_out, dn_in) = (out.grad.dot(nu), inn.grad.dot(nu));
            flux = flux.max((k * dn_in - dn_out).abs() / dn_out.abs().max(1e-300));
        }
    }
    (cont, flux)
}

#[test]
fn transmission_conditions_hold() {
    let g = geom();
    for (k1, k2) in [(7.0, 5.0), (70.0, 50.0), (7000.0, 5000.0)] {
        let s = FieldSolver::new(&g, ConductivityPair::finite(k1, k2).unwrap(), X, 1e-12).unwrap();
        let (cont, flux) = transmission_errors(&s);
        assert!(cont < 1e-8, "({k1},{k2}) continuity {cont:e}");
        assert!(flux < 1e-6, "({k1},{k2}) flux {flux:e}");
    }
}

#[test]
fn transmission_for_oblique_drive_and_weak_inclusions() {
    let g = geom();
    for (k1, k2) in [(0.03, 0.02), (0.5, 3.0)] {
        let s = FieldSolver::new(&g, ConductivityPair::finite(k1, k2).unwrap(), HarmonicDrive::new(0.6, -0.8), 1e-12)
            .unwrap();
        let (cont, flux) = transmission_errors(&s);
        assert!(cont < 1e-8 && flux < 1e-6, "({k1},{k2}): {cont:e} {flux:e}");
    }
}

/// 5-point Laplacian relative to `|∇u|/α + 10³·256 ulp(|u|)/h²`; the second
/// term is the rounding floor of the stencil (observed up to 158 ulp of
/// `u`), which dominates deep inside a highly conducting disk where
/// `u` is nearly constant and `|∇u|` is tiny.
fn laplacian_residual(s: &FieldSolver, pt: CartesianPoint) -> f64 {
    let a = s.geometry().alpha;
    let h = 1e-4 * a;
    let u = |dx: f64, dy: f64| s.evaluate(CartesianPoint::new(pt.x + dx, pt.y + dy)).unwrap().u;
    let u0 = u(0.0, 0.0);
    let lap = (u(h, 0.0) + u(-h, 0.0) + u(0.0, h) + u(0.0, -h) - 4.0 * u0) / (h * h);
    let grad = s.evaluate(pt).unwrap().grad.norm();
    let rounding = 256.0 * u0.abs().max(1.0) * f64::EPSILON / (h * h);
    lap.abs() / (grad / a + 1e3 * rounding)
}

#[test]
fn finite_difference_laplacian_vanishes_in_every_region() {
    let g = geom();
    let points = [
        CartesianPoint::new(0.0, 0.08),
        CartesianPoint::new(0.5, 2.0),
        CartesianPoint::new(-1.0, -3.5),
        CartesianPoint::new(-3.0, 0.5),
        CartesianPoint::new(-0.3, 0.02),
        CartesianPoint::new(2.0, -0.3),
        CartesianPoint::new(0.2, 0.01),
    ];
    for (k1, k2) in [(7.0, 5.0), (70.0, 50.0), (7000.0, 5000.0)] {
        let s = FieldSolver::new(&g, ConductivityPair::finite(k1, k2).unwrap(), X, 1e-12).unwrap();
        for &pt in &points {
            let r = laplacian_residual(&s, pt);
            assert!(r < 1e-3, "({k1},{k2}) at {pt:?} [{:?}]: {r:e}", s.region(pt));
        }
    }
}

#[test]
fn symmetric_pair_gives_odd_perturbation() {
    let g = DiskPairGeometry::new(2.0, 2.0, 0.05).unwrap();
    let s = FieldSolver::new(&g, ConductivityPair::finite(7.0, 7.0).unwrap(), X, 1e-12).unwrap();
    for &(x, y) in &[(0.01, 0.02), (0.7, 1.5), (3.0, -0.2), (10.0, 4.0), (1.2, 0.0)] {
        let a = s.evaluate(CartesianPoint::new(x, y)).unwrap().perturbation;
        let b = s.evaluate(CartesianPoint::new(-x, y)).unwrap().perturbation;
        assert!((a + b).abs() < 1e-9, "({x},{y}): {a} {b}");
    }
    for n in [1, 5, 50] {
        let (a, b) = coefficients(&g, &ConductivityPair::finite(7.0, 7.0).unwrap(), n).unwrap();
        assert!((a + b).abs() < 1e-15 * a.abs().max(1e-300));
        let (a, b) = coefficients_perfect(&g, n).unwrap();
        assert!((a + b).abs() < 1e-15 * a.abs().max(1e-300));
    }
}

#[test]
fn perturbation_decays_like_inverse_distance() {
    // frozen constant for (3, 2, 7, 5, H = x); observed maximum 11.15
    const M: f64 = 12.0;
    for eps in [0.5, 1e-2, 1e-4] {
        let g = DiskPairGeometry::new(3.0, 2.0, eps).unwrap();
        let s = FieldSolver::new(&g, ConductivityPair::finite(7.0, 5.0).unwrap(), X, 1e-12).unwrap();
        for i in 0..20 {
            let r = 30.0 * 10f64.powf(3.0 * i as f64 / 19.0);
            for phi in [0.3_f64, 1.2, 2.5] {
                let v = s.evaluate(CartesianPoint::new(r * phi.cos(), r * phi.sin())).unwrap();
                assert!(v.perturbation.abs() * r <= M, "eps {eps}, r {r}: {}", v.perturbation.abs() * r);
            }
        }
    }
}

#[test]
fn weak_contrast_leaves_the_background() {
    let g = geom();
    let pt = CartesianPoint::new(0.3, 0.4);
    let mut prev = f64::MAX;
    for d in [1e-1, 1e-2, 1e-3] {
        let v = evaluate_u(pt, &g, ConductivityPair::finite(1.0 + d, 1.0 - d).unwrap(), X, 1e-12).unwrap();
        let dev = (v.u - pt.x).abs();
        assert!(dev < prev && dev < 5.0 * d, "{d}: {dev}");
        prev = dev;
    }
}

#[test]
fn perfect_conductor_solution_is_constant_on_each_circle() {
    let g = geom();
    let s = FieldSolver::perfect(&g, X, 1e-12).unwrap();
    let scale = s.gradient_at_closest_point(1).unwrap();
    for j in 1..=2 {
        let mut max_t: f64 = 0.0;
        for i in 0..64 {
            let theta = -PI + 2.0 * PI * (i as f64 + 0.5) / 64.0;
            let bp = BipolarPoint::new(g.boundary_level(j), theta);
            let v = s.evaluate_bipolar(bp, Branch::Exterior).unwrap();
            let (_, t) = g.level_circle_frame(bp);
            max_t = max_t.max(v.grad.dot(t).abs());
        }
        assert!(max_t < 1e-6 * scale, "disk {j}: {max_t:e}");
    }
}

/// `∫_{∂B_j} ∂(u−H)/∂ν ds = −sgn(ξ_j) ∫ ∂_ξ(u−H) dθ` by the trapezoid
/// rule; the background carries no flux through a closed curve.
fn net_flux(s: &FieldSolver, j: usize, n: usize) -> f64 {
    let g = s.geometry();
    let level = g.boundary_level(j);
    let dtheta = 2.0 * PI / n as f64;
    let sum: f64 = (0..n)
        .map(|i| s.evaluate_bipolar(BipolarPoint::new(level, -PI + dtheta * i as f64), Branch::Exterior).unwrap().d_xi)
        .sum();
    -level.signum() * sum * dtheta
}

#[test]
fn perfect_conductor_carries_no_net_flux() {
    // the boundary data have Fourier modes decaying like e^{−nξ_j}, so the
    // rule needs n ≫ 1/ξ_j points: 256 suffices down to ε = 0.05
    for (eps, n) in [(0.1, 256), (0.05, 256), (0.01, 1024)] {
        let g = DiskPairGeometry::new(3.0, 2.0, eps).unwrap();
        let s = FieldSolver::perfect(&g, X, 1e-12).unwrap();
        let scale = s.gradient_at_closest_point(1).unwrap();
        for j in 1..=2 {
            let flux = net_flux(&s, j, n);
            assert!(flux.abs() < 1e-6 * scale * g.disk(j).radius, "eps {eps}, disk {j}: {flux:e}");
        }
    }
}

#[test]
fn finite_conductors_carry_no_net_flux_either() {
    let g = DiskPairGeometry::new(3.0, 2.0, 0.1).unwrap();
    let s = FieldSolver::new(&g, ConductivityPair::finite(7.0, 5.0).unwrap(), X, 1e-12).unwrap();
    for j in 1..=2 {
        assert!(net_flux(&s, j, 256).abs() < 1e-9);
    }
}

#[test]
fn one_shot_helpers_match_the_solver() {
    let g = geom();
    let pt = CartesianPoint::new(0.1, 0.3);
    let a = evaluate_u_infinity(pt, &g, X, 1e-12).unwrap();
    let b = FieldSolver::perfect(&g, X, 1e-12).unwrap().evaluate(pt).unwrap();
    assert_eq!(a.u, b.u);
    assert!(evaluate_u_infinity(pt, &g, HarmonicDrive::new(0.0, 1.0), 1e-12).is_err());
}

#[test]
fn finite_contrast_converges_to_perfect_conductor_like_inverse_k() {
    let g = DiskPairGeometry::new(3.0, 2.0, 0.1).unwrap();
    let ks = [1e2, 1e3, 1e4, 1e5];
    let thetas = theta_grid_with_zero(65);
    let gaps: Vec<f64> = ks.iter().map(|&k| infinity_gap(&g, k, 1, &thetas, 1e-12).unwrap().max_grad_norm()).collect();
    let slope = log_log_slope(&ks, &gaps).unwrap();
    assert!((slope + 1.0).abs() < 0.1, "slope {slope}, gaps {gaps:?}");
}

#[test]
fn coefficient_distance_to_perfect_limit_is_order_inverse_k() {
    // k|A_n − A'_n| e^{2nξ₂} (1 − e^{−2n(ξ₁+ξ₂)})² ≤ M; frozen, observed 5.69
    const M: f64 = 6.0;
    for eps in [0.1, 1e-2, 1e-3, 1e-4] {
        let g = DiskPairGeometry::new(3.0, 2.0, eps).unwrap();
        for k in [10.0, 1e2, 1e3, 1e4, 1e5] {
            let kp = ConductivityPair::finite(k, k).unwrap();
            for n in (1..2000).step_by(7) {
                let (a, _) = coefficients(&g, &kp, n).unwrap();
                let (ap, _) = coefficients_perfect(&g, n).unwrap();
                let nf = n as f64;
                let e = (-2.0 * nf * (g.xi1 + g.xi2)).exp();
                let v = k * (a - ap).abs() * (2.0 * nf * g.xi2).exp() * (1.0 - e).powi(2);
                assert!(!v.is_finite() || v <= M, "eps {eps}, k {k}, n {n}: {v}");
            }
        }
    }
}

#[test]
fn blow_up_sandwich() {
    // |∇u|⁺(x₁)(1 − τ + (r*/min r)√ε)/|∇H·n|, frozen band; observed [2.41, 4.08]
    const BAND: (f64, f64) = (2.0, 4.5);
    for eps in [1e-2, 1e-3, 1e-4] {
        let g = DiskPairGeometry::new(3.0, 2.0, eps).unwrap();
        for k in [1e2, 1e3, 1e4] {
            let kp = ConductivityPair::finite(k, k).unwrap();
            let s = FieldSolver::new(&g, kp, X, 1e-10).unwrap();
            let r = s.gradient_at_closest_point(1).unwrap() * (1.0 - kp.tau() + g.r_star / 2.0 * eps.sqrt());
            assert!(r >= BAND.0 && r <= BAND.1, "eps {eps}, k {k}: {r}");
        }
    }
}

#[test]
fn perfect_conductor_gradient_blows_up_like_inverse_root_gap() {
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let grads: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let g = DiskPairGeometry::new(3.0, 2.0, e).unwrap();
            FieldSolver::perfect(&g, X, 1e-10).unwrap().gradient_at_closest_point(1).unwrap()
        })
        .collect();
    let slope = log_log_slope(&eps, &grads).unwrap();
    assert!((slope + 0.5).abs() < 0.03, "{slope}");
}

#[test]
fn truncation_certificate_reports_within_tolerance() {
    let g = DiskPairGeometry::new(3.0, 2.0, 1e-4).unwrap();
    let s = FieldSolver::new(&g, ConductivityPair::finite(1500.0, 1200.0).unwrap(), X, 1e-8).unwrap();
    let (_, t) = s.evaluate_value(g.midpoint()).unwrap();
    assert!(t.tail_bound <= 1e-8 && t.n_used <= 5000, "{t:?}");
    let full = s.evaluate(g.midpoint()).unwrap().truncation;
    assert!(full.grad_tail_bound.unwrap() <= 1e-8);
}
