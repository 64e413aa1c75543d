//! Dense-grid checks of the bounds satisfied by `P(z; β)`, shared by the
//! property tests and the acceptance run.

use gapfield::geometry::cosh_plus_cos;
use gapfield::lerch::{cap_p, summation_identity_gap, EvalBudget};
use gapfield::Complex64;

/// Outcome of one grid sweep: points checked and the first violation.
#[derive(Debug, Default)]
pub struct GridCheck {
    pub points: usize,
    pub worst_ratio: f64,
    pub violation: Option<String>,
}

impl GridCheck {
    fn record(&mut self, value: f64, bound: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        let ratio = value / bound;
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
        }
        // a relative allowance of a few ulps absorbs round-off in `bound`
        if value > bound * (1.0 + 1e-12) + 1e-15 && self.violation.is_none() {
            self.violation = Some(format!("{} : {value:e} > {bound:e}", at()));
        }
    }

    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn budget() -> EvalBudget {
    EvalBudget::with_tol(1e-14).unwrap()
}

fn p_at(s: f64, theta: f64, beta: f64) -> Complex64 {
    cap_p(Complex64::from_polar((-s).exp(), theta), beta, &budget()).unwrap()
}

/// Grid in `(s, θ, β)`: 25 × 20 × 20 = 10⁴ points.
fn grid() -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    (log_space(0.02, 4.0, 25), lin_space(-3.1, 3.1, 20), log_space(1e-3, 1e3, 20))
}

/// On the same grid:
/// 0. `|P(e^{−s+iθ};β)| ≤ 1/(2β(cosh s + cos θ))`,
/// 1. `|P| ≤ 4 + 4/√(cosh s + cos θ)`,
/// 2. `|(cosh s + cos θ) P| ≤ e^{s}/(2(β+1))` as usually quoted,
/// 3. `|(cosh s + cos θ) P| ≤ e^{s}/(β+1)`, the form that actually holds:
///    at `θ = 0`, `β → 0⁺`, `s → 0⁺` the left side tends to 1 while the
///    quoted right side tends to 1/2.
pub fn modulus_bounds() -> [GridCheck; 4] {
    let (ss, ts, bs) = grid();
    let mut out: [GridCheck; 4] = Default::default();
    for &s in &ss {
        for &t in &ts {
            let d = cosh_plus_cos(s, t);
            for &b in &bs {
                let p = p_at(s, t, b).norm();
                let at = || format!("s={s}, theta={t}, beta={b}");
                out[0].record(p, 1.0 / (2.0 * b * d), at);
                out[1].record(p, 4.0 + 4.0 / d.sqrt(), at);
                out[2].record(d * p, s.exp() / (2.0 * (b + 1.0)), at);
                out[3].record(d * p, s.exp() / (b + 1.0), at);
            }
        }
    }
    out
}

/// `|P(e^{−s₂+iθ}) − P(e^{−s₁+iθ})| ≤ (s₂ − s₁)/(cosh s₁ + cos θ)`.
pub fn lipschitz_bound() -> GridCheck {
    let (ss, ts, bs) = grid();
    let mut out = GridCheck::default();
    for &s1 in &ss {
        for &t in &ts {
            let d = cosh_plus_cos(s1, t);
            for &b in &bs {
                let p1 = p_at(s1, t, b);
                for ds in [1e-3, 0.1, 1.0] {
                    let p2 = p_at(s1 + ds, t, b);
                    out.record((p2 - p1).norm(), ds / d, || format!("s1={s1}, ds={ds}, theta={t}, beta={b}"));
                }
            }
        }
    }
    out
}

/// `P(z̄; β) = conj P(z; β)` to round-off.
pub fn conjugation() -> GridCheck {
    let (ss, ts, bs) = grid();
    let mut out = GridCheck::default();
    for &s in &ss {
        for &t in &ts {
            for &b in &bs {
                let p = p_at(s, t, b);
                let q = p_at(s, -t, b);
                out.record((q - p.conj()).norm(), 1e-13 * (1.0 + p.norm()), || format!("s={s}, theta={t}, beta={b}"));
            }
        }
    }
    out
}

/// On a 100 × 100 `(ξ, β)` grid:
/// 0. `1/(4(β+1)) ≤ Re P(e^{−ξ}; β)` as usually quoted,
/// 1. `Re P(e^{−ξ}; β) ≤ 1/(β+1)`,
/// 2. `e^{−ξ}/(4(β+1)) ≤ Re P(e^{−ξ}; β)`, the lower bound that holds for
///    `ξ > 0`: `p₀'(t+ξ) ≥ e^{−t−ξ}/4`, not `e^{−t}/4`.
pub fn real_axis_sandwich() -> [GridCheck; 3] {
    let mut out: [GridCheck; 3] = Default::default();
    for &xi in &log_space(1e-3, 1.0, 100) {
        for &b in &log_space(1e-3, 1e3, 100) {
            let re = p_at(xi, 0.0, b).re;
            let at = || format!("xi={xi}, beta={b}");
            out[0].record(1.0 / (4.0 * (b + 1.0)), re, at);
            out[1].record(re, 1.0 / (b + 1.0), at);
            out[2].record((-xi).exp() / (4.0 * (b + 1.0)), re, at);
        }
    }
    out
}

/// Discrete-sum versus `P` gap against `4a₀/(cosh(a₀−a) + cos θ)` on a
/// 10 × 10 × 10 × 10 grid in `(a₀, a/a₀, τ, θ)`.
pub fn summation_gap() -> GridCheck {
    let mut out = GridCheck::default();
    for &a0 in &log_space(0.01, 2.0, 10) {
        for &frac in &lin_space(-1.0, 0.95, 10) {
            let a = frac * a0;
            for &tau in &lin_space(0.01, 0.98, 10) {
                for &t in &lin_space(-3.0, 3.0, 10) {
                    let g = summation_identity_gap(a0, a, tau, t, None).unwrap();
                    out.record(g.gap, g.bound, || format!("a0={a0}, a={a}, tau={tau}, theta={t}"));
                }
            }
        }
    }
    out
}
