//! The Lerch transcendent `Φ(z, 1, β) = Σ_{n≥0} zⁿ/(n+β)` and the two
//! functions built on it,
//!
//! * `L(z; β) = −∫₀¹ z t^β/(1 + z t) dt = −z Φ(−z, 1, β+1)`,
//! * `P(z; β) = −z ∂L/∂z = z/(1+z) − β z Φ(−z, 1, β+1)`.
//!
//! The power series is the evaluation path: its tail after `N` terms is
//! bounded by `|z|^{N+1}/((N+1+β)(1−|z|))`, so truncation is certified.
//! Quadrature of the integral representations is exposed separately for
//! cross-validation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::{integrate, integrate_semi_infinite, QuadratureOptions};

/// Largest admissible `|z|` for the series path.
pub const MAX_MODULUS: f64 = 1.0 - 1e-6;

/// Tolerance and term cap for a truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalBudget {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for EvalBudget {
    fn default() -> Self {
        Self { tol: 1e-10, max_terms: 50_000_000 }
    }
}

impl EvalBudget {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol >= 1e-14 && tol.is_finite()) {
            return Err(invalid(format!("tolerance must be at least 1e-14, got {tol}")));
        }
        if max_terms == 0 {
            return Err(invalid("max_terms must be positive"));
        }
        Ok(Self { tol, max_terms })
    }

    pub fn with_tol(tol: f64) -> Result<Self> {
        Self::new(tol, Self::default().max_terms)
    }
}

/// A truncated series value with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
}

fn check_modulus(z: Complex64) -> Result<f64> {
    let r = z.norm();
    if !r.is_finite() {
        return Err(domain("non-finite argument"));
    }
    if r > MAX_MODULUS {
        return Err(domain(format!("|z| = {r} exceeds {MAX_MODULUS}")));
    }
    Ok(r)
}

/// Power-series evaluation of `Φ(z, 1, β)` with its tail certificate.
pub fn lerch_phi_series(z: Complex64, beta: f64, budget: &EvalBudget) -> Result<SeriesValue> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    let r = check_modulus(z)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut rpow = 1.0;
    let mut tail = f64::INFINITY;
    for n in 0..budget.max_terms {
        let nf = n as f64;
        sum += pow / (nf + beta);
        pow *= z;
        rpow *= r;
        tail = rpow / ((nf + 1.0 + beta) * (1.0 - r));
        if tail <= budget.tol {
            return Ok(SeriesValue { value: sum, terms: n + 1, tail_bound: tail });
        }
    }
    Err(Error::BudgetExhausted { terms: budget.max_terms, achieved: tail, tol: budget.tol })
}

/// `Φ(z, 1, β)` for `|z| ≤ 1 − 10⁻⁶`, `β > 0`.
pub fn lerch_phi(z: Complex64, beta: f64, budget: &EvalBudget) -> Result<Complex64> {
    lerch_phi_series(z, beta, budget).map(|s| s.value)
}

/// `Φ(z, 1, β)` by adaptive quadrature of `∫₀^∞ e^{−βt}/(1 − z e^{−t}) dt`.
///
/// With `u = e^{−t}` and the `1/β` part split off analytically this is
/// `1/β + z ∫₀¹ u^β/(1 − z u) du`, whose integrand is bounded.
pub fn lerch_phi_quadrature(z: Complex64, beta: f64, tol: f64) -> Result<Complex64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    check_modulus(z)?;
    let opts = QuadratureOptions { abs_tol: tol, ..Default::default() };
    let r = integrate(|u| u.powf(beta) / (1.0 - z * u), 0.0, 1.0, opts)?;
    Ok(1.0 / beta + z * r.value)
}

/// `log(1 + z)` without cancellation for small `z`.
pub fn log1p_complex(z: Complex64) -> Complex64 {
    let modulus_sq_minus_one = 2.0 * z.re + z.norm_sqr();
    Complex64::new(0.5 * modulus_sq_minus_one.ln_1p(), z.im.atan2(1.0 + z.re))
}

fn check_beta_nonneg(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be non-negative, got {beta}")));
    }
    Ok(())
}

/// `L(z; β)`; `β = 0` dispatches to `−log(1 + z)`.
pub fn cap_l(z: Complex64, beta: f64, budget: &EvalBudget) -> Result<Complex64> {
    check_beta_nonneg(beta)?;
    check_modulus(z)?;
    if beta == 0.0 {
        return Ok(-log1p_complex(z));
    }
    Ok(-z * lerch_phi(-z, beta + 1.0, budget)?)
}

/// `L(z; β)` by quadrature of its defining integral over `[0, 1]`.
pub fn cap_l_quadrature(z: Complex64, beta: f64, tol: f64) -> Result<Complex64> {
    check_beta_nonneg(beta)?;
    check_modulus(z)?;
    let opts = QuadratureOptions { abs_tol: tol, ..Default::default() };
    let r = integrate(|t| z * t.powf(beta) / (1.0 + z * t), 0.0, 1.0, opts)?;
    Ok(-r.value)
}

/// `P(z; β)`; `β = 0` dispatches to `z/(1+z)`.
pub fn cap_p(z: Complex64, beta: f64, budget: &EvalBudget) -> Result<Complex64> {
    check_beta_nonneg(beta)?;
    check_modulus(z)?;
    let head = z / (1.0 + z);
    if beta == 0.0 {
        return Ok(head);
    }
    Ok(head - beta * z * lerch_phi(-z, beta + 1.0, budget)?)
}

/// `L` and `P` at the same argument, sharing one Φ evaluation.
pub fn cap_l_and_p(z: Complex64, beta: f64, budget: &EvalBudget) -> Result<(Complex64, Complex64)> {
    check_beta_nonneg(beta)?;
    check_modulus(z)?;
    let head = z / (1.0 + z);
    if beta == 0.0 {
        return Ok((-log1p_complex(z), head));
    }
    let l = -z * lerch_phi(-z, beta + 1.0, budget)?;
    Ok((l, head + beta * l))
}

/// `p_θ(t) = 1/(1 + e^{−t+iθ})`, `t > 0`.
pub fn p_theta(t: f64, theta: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(invalid(format!("p_theta requires t > 0, got {t}")));
    }
    let w = Complex64::new(-t, theta).exp();
    Ok(1.0 / (1.0 + w))
}

/// `p_θ'(t) = e^{−t+iθ}/(1 + e^{−t+iθ})²`, `t > 0`.
pub fn p_theta_prime(t: f64, theta: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(invalid(format!("p_theta_prime requires t > 0, got {t}")));
    }
    let w = Complex64::new(-t, theta).exp();
    let d = 1.0 + w;
    Ok(w / (d * d))
}

/// `P(e^{−s+iθ}; β)` from `∫₀^∞ e^{−βt} p_θ'(t+s) dt` by quadrature.
pub fn cap_p_quadrature(s: f64, theta: f64, beta: f64, tol: f64) -> Result<Complex64> {
    check_beta_nonneg(beta)?;
    if !(s > 0.0) {
        return Err(invalid(format!("s must be positive, got {s}")));
    }
    let opts = QuadratureOptions { abs_tol: tol, ..Default::default() };
    let r = integrate_semi_infinite(
        |t| {
            let w = Complex64::new(-(t + s), theta).exp();
            let d = 1.0 + w;
            (-beta * t).exp() * w / (d * d)
        },
        opts,
    )?;
    Ok(r.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// `β ≤ 0.1`: `Φ ≈ 1/β − log(1 − z)`.
    Small,
    /// `β ≥ 10`: two-term expansion in `1/β`.
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotic {
    pub value: Complex64,
    /// Rigorous bound on `|Φ − value|`.
    pub error_bound: f64,
}

/// Extreme-β approximations of `Φ(z, 1, β)`.
pub fn phi_asymptotic(z: Complex64, beta: f64, regime: AsymptoticRegime) -> Result<Asymptotic> {
    let r = check_modulus(z)?;
    let one_minus = 1.0 - z;
    match regime {
        AsymptoticRegime::Small => {
            if !(beta > 0.0 && beta <= 0.1) {
                return Err(invalid(format!("small-beta regime needs 0 < beta <= 0.1, got {beta}")));
            }
            // |Φ − 1/β + log(1−z)| = β|Σ z^k/(k(k+β))| ≤ β Li₂(|z|)
            let value = 1.0 / beta - log1p_complex(-z);
            Ok(Asymptotic { value, error_bound: beta * dilog_unit(r) })
        }
        AsymptoticRegime::Large => {
            if !(beta >= 10.0 && beta.is_finite()) {
                return Err(invalid(format!("large-beta regime needs beta >= 10, got {beta}")));
            }
            let value = 1.0 / (beta * one_minus) - z / (beta * beta * one_minus * one_minus);
            // z = −e^{−ξ+iθ} gives cosh ξ + cos θ = |1 − z|²/(2|z|)
            let error_bound = if r == 0.0 {
                0.0
            } else {
                let d = one_minus.norm_sqr() / (2.0 * r);
                32.0 / (beta.powi(3) * d.powf(1.5))
            };
            Ok(Asymptotic { value, error_bound })
        }
    }
}

/// `Li₂(r) = Σ r^k/k²` for `0 ≤ r ≤ 1`.
fn dilog_unit(r: f64) -> f64 {
    if r >= 1.0 {
        return PI * PI / 6.0;
    }
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..100_000 {
        pow *= r;
        let term = pow / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum.min(PI * PI / 6.0)
}

/// Outcome of comparing the discrete sum against `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationGap {
    pub gap: f64,
    pub bound: f64,
    pub terms: usize,
}

impl SummationGap {
    pub fn holds(&self) -> bool {
        self.gap <= self.bound
    }
}

/// Distance between `a₀ Σ_{m≥1} τ^{m−1} p_θ'(m a₀ − a)` and
/// `P(e^{−(a₀−a)+iθ}; −ln τ / a₀)`, together with the bound
/// `4a₀/(cosh(a₀−a) + cos θ)`.
///
/// `n_terms = None` picks the smallest count whose geometric tail is below
/// `10⁻¹²`; an explicit count is rejected if its tail is larger.
pub fn summation_identity_gap(
    a0: f64,
    a: f64,
    tau: f64,
    theta: f64,
    n_terms: Option<usize>,
) -> Result<SummationGap> {
    if !(a0 > 0.0 && a0.is_finite()) {
        return Err(invalid(format!("a0 must be positive, got {a0}")));
    }
    if !(a < a0) {
        return Err(invalid(format!("need a < a0, got a = {a}, a0 = {a0}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(invalid(format!("tau must lie in (0, 1), got {tau}")));
    }
    let s0 = a0 - a;
    let den = crate::geometry::cosh_plus_cos(s0, theta);
    if !(den > 0.0) {
        return Err(domain("cosh(a0 - a) + cos(theta) vanishes"));
    }
    // every term is bounded by a₀ τ^m/(2 den)
    let term_cap = a0 / (2.0 * den);
    let tail_after = |n: usize| term_cap * tau.powi(n as i32) / (1.0 - tau);
    let n = match n_terms {
        Some(n) => {
            if tail_after(n) > 1e-12 {
                return Err(invalid(format!(
                    "{n} terms leave a tail of {:e}, above 1e-12",
                    tail_after(n)
                )));
            }
            n
        }
        None => {
            let mut n = 1;
            while tail_after(n) > 1e-12 {
                n += 1;
            }
            n
        }
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut weight = 1.0;
    for m in 0..n {
        sum += weight * p_theta_prime(m as f64 * a0 + s0, theta)?;
        weight *= tau;
    }
    sum *= a0;
    let b = -tau.ln() / a0;
    let z = Complex64::from_polar((-s0).exp(), theta);
    let budget = EvalBudget { tol: 1e-13, ..Default::default() };
    let p = cap_p(z, b, &budget)?;
    Ok(SummationGap { gap: (sum - p).norm(), bound: 4.0 * a0 / den, terms: n })
}
