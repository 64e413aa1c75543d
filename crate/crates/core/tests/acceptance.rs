//! Acceptance report: one PASS/FAIL line per headline criterion.
//!
//! Run with `cargo test --test acceptance`. The process always exits 0 so a
//! red line does not mask the rest of the suite; the verdicts are in the
//! printed report.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gapfield::geometry::{reflect, BipolarPoint, Branch, CartesianPoint, DiskPairGeometry};
use gapfield::lerch::{cap_l, lerch_phi, lerch_phi_quadrature, lerch_phi_series, EvalBudget};
use gapfield::series::{ConductivityPair, FieldSolver, HarmonicDrive};
use gapfield::singular::{bipolar_grid, boundary_profiles, decompose, infinity_gap, theta_grid_with_zero};
use gapfield::stats::log_log_slope;
use gapfield::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::inequalities::{conjugation, lipschitz_bound, modulus_bounds, real_axis_sandwich, summation_gap, GridCheck};

const X: HarmonicDrive = HarmonicDrive::new(1.0, 0.0);
const Y: HarmonicDrive = HarmonicDrive::new(0.0, 1.0);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn report(name: &str, budget: Duration, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = f();
    let elapsed = start.elapsed();
    let pass = v.pass && elapsed < budget;
    println!(
        "{} {name}: {} [{:.2} s, budget {} s]",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn geometry_anchors() -> Verdict {
    let g = DiskPairGeometry::new(2.5, 3.0, 0.1).unwrap();
    let caption = (0.21021, 0.17557);
    let xi_err = ((g.xi1 / caption.0 - 1.0).abs()).max((g.xi2 / caption.1 - 1.0).abs());
    let mut round_trip: f64 = 0.0;
    for i in 0..64 {
        for j in 0..64 {
            let p = CartesianPoint::new(-8.0 + 16.0 * (i as f64 + 0.5) / 64.0, -8.0 + 16.0 * (j as f64 + 0.5) / 64.0);
            let q = g.to_cartesian(g.to_bipolar(p).unwrap()).unwrap();
            round_trip = round_trip.max(q.distance(p));
        }
    }
    let reflection = reflect(g.p2, &g.disk1).unwrap().distance(g.p1);
    verdict(
        xi_err < 0.01 && round_trip < 1e-10 && reflection < 1e-12,
        format!("xi=({:.5}, {:.5}) rel err {xi_err:.1e}, round trip {round_trip:.1e}, |R1(p2)-p1| {reflection:.1e}", g.xi1, g.xi2),
    )
}

fn lerch_dual_path() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x1e5c);
    let budget = EvalBudget::with_tol(1e-14).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let z = Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
        let beta = 10f64.powf(rng.gen_range(-3.0..3.0));
        let a = lerch_phi_series(z, beta, &budget).unwrap().value;
        let b = lerch_phi_quadrature(z, beta, 1e-13).unwrap();
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
    }
    let phi = (lerch_phi(Complex64::new(0.5, 0.0), 1.0, &budget).unwrap() - 2.0 * 2f64.ln()).norm();
    let l = (cap_l(Complex64::new(0.5, 0.0), 0.0, &budget).unwrap() + 1.5f64.ln()).norm();
    verdict(
        worst < 1e-10 && phi < 1e-12 && l < 1e-12,
        format!("200 draws worst {worst:.1e}, Phi(0.5,1,1) err {phi:.1e}, L(0.5;0) err {l:.1e}"),
    )
}

fn check_line(name: &str, c: &GridCheck) -> String {
    match &c.violation {
        None => format!("{name} ok ({} pts)", c.points),
        Some(at) => format!("{name} VIOLATED ({} pts, worst ratio {:.3} at {at})", c.points, c.worst_ratio),
    }
}

fn inequality_suite() -> Verdict {
    let m = modulus_bounds();
    let lip = lipschitz_bound();
    let conj = conjugation();
    let sand = real_axis_sandwich();
    let sum = summation_gap();
    let stated = [
        ("|P|<=1/(2bD)", &m[0]),
        ("|P|<=4+4/sqrtD", &m[1]),
        ("|P|<=e^s/(2(b+1))", &m[2]),
        ("lipschitz", &lip),
        ("conjugation", &conj),
        ("ReP<=1/(b+1)", &sand[1]),
        ("ReP>=1/(4(b+1))", &sand[0]),
        ("summation gap", &sum),
    ];
    let pass = stated.iter().all(|(_, c)| c.passed() && c.points >= 10_000);
    let mut detail: Vec<String> = stated.iter().map(|(n, c)| check_line(n, c)).collect();
    detail.push(check_line("corrected |P|<=e^s/(b+1)", &m[3]));
    detail.push(check_line("corrected ReP>=e^-xi/(4(b+1))", &sand[2]));
    verdict(pass, detail.join("; "))
}

fn pde_correctness() -> Verdict {
    let g = DiskPairGeometry::new(3.0, 2.0, 0.01).unwrap();
    let points = [(0.0, 0.08), (0.5, 2.0), (-1.0, -3.5), (-3.0, 0.5), (-0.3, 0.02), (2.0, -0.3), (0.2, 0.01)];
    let (mut cont, mut flux, mut lap_floor, mut lap_raw): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for (k1, k2) in [(7.0, 5.0), (70.0, 50.0), (7000.0, 5000.0)] {
        let s = FieldSolver::new(&g, ConductivityPair::finite(k1, k2).unwrap(), X, 1e-12).unwrap();
        for (j, inside, k) in [(1, Branch::Inside1, k1), (2, Branch::Inside2, k2)] {
            for i in 0..32 {
                let bp = BipolarPoint::new(g.boundary_level(j), -PI + 2.0 * PI * (i as f64 + 0.5) / 32.0);
                let (nu, _) = g.level_circle_frame(bp);
                let out = s.evaluate_bipolar(bp, Branch::Exterior).unwrap();
                let inn = s.evaluate_bipolar(bp, inside).unwrap();
                cont = cont.max((out.u - inn.u).abs());
                let dn = out.grad.dot(nu);
                flux = flux.max((k * inn.grad.dot(nu) - dn).abs() / dn.abs().max(1e-300));
            }
        }
        let h = 1e-4 * g.alpha;
        for &(x, y) in &points {
            let u = |dx: f64, dy: f64| s.evaluate(CartesianPoint::new(x + dx, y + dy)).unwrap().u;
            let u0 = u(0.0, 0.0);
            let lap = (u(h, 0.0) + u(-h, 0.0) + u(0.0, h) + u(0.0, -h) - 4.0 * u0) / (h * h);
            let scale = s.evaluate(CartesianPoint::new(x, y)).unwrap().grad.norm() / g.alpha;
            let rounding = 256.0 * u0.abs().max(1.0) * f64::EPSILON / (h * h);
            lap_raw = lap_raw.max(lap.abs() / scale);
            lap_floor = lap_floor.max(lap.abs() / (scale + 1e3 * rounding));
        }
    }
    verdict(
        cont < 1e-8 && flux < 1e-6 && lap_floor < 1e-3,
        format!(
            "continuity {cont:.1e}, flux {flux:.1e}, FD Laplacian {lap_floor:.1e} \
             (relative to |grad u|/alpha + rounding floor; without floor {lap_raw:.1e})"
        ),
    )
}

fn blow_up_slope() -> Verdict {
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let grads: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let g = DiskPairGeometry::new(3.0, 2.0, e).unwrap();
            FieldSolver::perfect(&g, X, 1e-10).unwrap().gradient_at_closest_point(1).unwrap()
        })
        .collect();
    let slope = log_log_slope(&eps, &grads).unwrap();
    verdict((slope + 0.5).abs() <= 0.03, format!("slope {slope:.4}"))
}

fn decomposition() -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for (k1, k2, d, label) in [(1500.0, 1200.0, X, "H=x"), (0.03, 0.02, Y, "H=y")] {
        let kp = ConductivityPair::finite(k1, k2).unwrap();
        let (mut sup, mut peak) = ([0.0; 2], [0.0; 2]);
        for (i, eps) in [1e-2, 1e-4].into_iter().enumerate() {
            let g = DiskPairGeometry::new(3.0, 2.0, eps).unwrap();
            let r = decompose(&bipolar_grid(&g, 9, 64, true).unwrap(), &g, kp, d, 1e-10).unwrap();
            sup[i] = r.sup_grad_ub;
            peak[i] = FieldSolver::new(&g, kp, d, 1e-10).unwrap().gradient_at_closest_point(1).unwrap();
        }
        let (bounded, grows) = (sup[1] <= 3.0 * sup[0], peak[1] >= 10.0 * peak[0]);
        pass &= bounded && grows;
        detail.push(format!(
            "({k1},{k2})/{label}: sup|grad ub| {:.3} -> {:.3} (x{:.2}{}), |grad u|+(x1) {:.3} -> {:.3} (x{:.2}{})",
            sup[0],
            sup[1],
            sup[1] / sup[0],
            if bounded { "" } else { " > 3" },
            peak[0],
            peak[1],
            peak[1] / peak[0],
            if grows { "" } else { " < 10" }
        ));
    }
    verdict(pass, detail.join("; "))
}

fn profile_gap() -> Verdict {
    let thetas = theta_grid_with_zero(129);
    let profile = |eps: f64, k1: f64, k2: f64| {
        let g = DiskPairGeometry::new(3.0, 2.0, eps).unwrap();
        let p = boundary_profiles(&g, ConductivityPair::finite(k1, k2).unwrap(), X, 1, &thetas, 1e-10).unwrap();
        (p.max_gap_to_q(), p.exact_normal[p.argmax_normal()].abs())
    };
    // max_θ gap for (1500, 1200) at ε = 0.5 on a fine θ-grid, frozen; its
    // maximum sits next to θ = π, so the 129-point grid sees slightly less
    const GAP_REF: f64 = 0.4949;
    let band = 3.0 * GAP_REF;
    let (reference, first_peak) = profile(0.5, 1500.0, 1200.0);
    let mut worst = reference;
    let mut peak = first_peak;
    for eps in [1e-2, 1e-4] {
        let (gap, p) = profile(eps, 1500.0, 1200.0);
        worst = worst.max(gap);
        peak = p;
    }
    let ex2_peaks: Vec<f64> = [(7.0, 5.0), (70.0, 50.0), (7000.0, 5000.0)]
        .iter()
        .map(|&(k1, k2)| {
            let (gap, p) = profile(1e-2, k1, k2);
            worst = worst.max(gap);
            p
        })
        .collect();
    let grows = peak > 50.0 * first_peak && ex2_peaks.windows(2).all(|w| w[1] > w[0]);
    verdict(
        worst <= band && grows,
        format!(
            "band 3x{GAP_REF} (eps=0.5 gap {reference:.4}), worst gap {worst:.4}; peaks {first_peak:.2} -> {peak:.2} (eps), \
             {:.2} -> {:.2} (k)",
            ex2_peaks[0], ex2_peaks[2]
        ),
    )
}

fn nonuniform_convergence() -> Verdict {
    let g = DiskPairGeometry::new(2.0, 3.0, 1e-5).unwrap();
    let fig = FieldSolver::perfect(&g, X, 1e-10).unwrap().gradient_at_closest_point(1).unwrap();
    let a = (600.0..=1000.0).contains(&fig);

    let eps = [1e-3, 1e-4, 1e-5, 1e-6];
    let gaps: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let g = DiskPairGeometry::new(2.0, 3.0, e).unwrap();
            infinity_gap(&g, e.powf(-0.75), 1, &[0.0], 1e-10).unwrap().exact[0].abs()
        })
        .collect();
    let slope_b = log_log_slope(&eps, &gaps).unwrap();
    let b = (slope_b + 0.25).abs() <= 0.05;

    let g = DiskPairGeometry::new(2.0, 3.0, 0.1).unwrap();
    let ks = [1e2, 1e3, 1e4, 1e5];
    let thetas = theta_grid_with_zero(65);
    let w: Vec<f64> = ks.iter().map(|&k| infinity_gap(&g, k, 1, &thetas, 1e-12).unwrap().max_grad_norm()).collect();
    let slope_c = log_log_slope(&ks, &w).unwrap();
    let c = (slope_c + 1.0).abs() <= 0.1;
    verdict(
        a && b && c,
        format!("(a) |grad u_inf|+(x1) = {fig:.1}; (b) slope {slope_b:.3}; (c) slope {slope_c:.3}"),
    )
}

fn performance() -> Verdict {
    let g = DiskPairGeometry::new(3.0, 2.0, 1e-4).unwrap();
    let s = FieldSolver::new(&g, ConductivityPair::finite(1500.0, 1200.0).unwrap(), X, 1e-8).unwrap();
    let pts = [g.midpoint(), CartesianPoint::new(0.3, 0.4), CartesianPoint::new(-5.0, 2.0)];
    let mut n_max = 0;
    let start = Instant::now();
    for &p in &pts {
        let (_, t) = s.evaluate_value(p).unwrap();
        n_max = n_max.max(t.n_used);
    }
    let per_value = start.elapsed() / pts.len() as u32;
    let start = Instant::now();
    let full = s.evaluate(g.midpoint()).unwrap();
    let with_grad = start.elapsed();
    verdict(
        n_max <= 5000 && per_value < Duration::from_millis(10),
        format!(
            "N = {n_max} for u to 1e-8, {:.3} ms per point; with gradient N = {} in {:.3} ms",
            per_value.as_secs_f64() * 1e3,
            full.truncation.n_used,
            with_grad.as_secs_f64() * 1e3
        ),
    )
}

fn main() {
    // `cargo test -- --list` and friends probe every test binary
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let secs = Duration::from_secs;
    let results = [
        report("geometry anchors", secs(1), geometry_anchors),
        report("Lerch dual path", secs(5), lerch_dual_path),
        report("inequality suite", secs(30), inequality_suite),
        report("PDE correctness", secs(60), pde_correctness),
        report("blow-up exponent", secs(120), blow_up_slope),
        report("decomposition boundedness", secs(300), decomposition),
        report("profile gap band", secs(300), profile_gap),
        report("non-uniform convergence", secs(300), nonuniform_convergence),
        report("performance", secs(1), performance),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
}
