//! Bipolar series solution of the two-inclusion transmission problem.
//!
//! For the drive `H = x` the solution is `x + Re U` with
//!
//! ```text
//! U = C + Σ A_n e^{n(ξ+iθ)} + B_n e^{−n(ξ+iθ)}             outside both disks
//! U = C + Σ A_n e^{n(ξ+iθ)} + B_n e^{n(2ξ₁+ξ−iθ)}           in B₁
//! U = C + Σ A_n e^{n(2ξ₂−ξ+iθ)} + B_n e^{−n(ξ+iθ)}          in B₂
//! ```
//!
//! and `C = −Σ (A_n + B_n)(−1)ⁿ`. The drive `H = y` uses `y + Im U` with
//! the reciprocal conductivities. The coefficients are stored rescaled as
//! `Â_n = A_n e^{2nξ₂}` and `B̂_n = B_n e^{2nξ₁}`, which are bounded in `n`;
//! every branch then becomes a pair of power series in arguments of
//! modulus below one, so no exponential with a positive exponent is formed.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, invalid, Error, Result};
use crate::geometry::{BipolarPoint, Branch, CartesianPoint, DiskPairGeometry, Region, Vector2};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 200_000;

/// Conductivity of one inclusion relative to the unit background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Conductivity {
    Finite(f64),
    PerfectlyConducting,
    Insulating,
}

impl Conductivity {
    pub fn finite(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(invalid(format!("conductivity must be positive and finite, got {k}")));
        }
        if k == 1.0 {
            return Err(invalid("conductivity 1 makes the inclusion invisible"));
        }
        Ok(Conductivity::Finite(k))
    }

    /// Parses a number, `"inf"` or `"0"`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "perfect" => Ok(Conductivity::PerfectlyConducting),
            "0" | "0.0" | "insulating" => Ok(Conductivity::Insulating),
            other => {
                let k: f64 = other.parse().map_err(|_| invalid(format!("bad conductivity '{s}'")))?;
                if k.is_infinite() && k > 0.0 {
                    Ok(Conductivity::PerfectlyConducting)
                } else if k == 0.0 {
                    Ok(Conductivity::Insulating)
                } else {
                    Self::finite(k)
                }
            }
        }
    }

    /// `τ = (k − 1)/(k + 1)`, `±1` at the extremes.
    pub fn tau(self) -> f64 {
        match self {
            Conductivity::Finite(k) => (k - 1.0) / (k + 1.0),
            Conductivity::PerfectlyConducting => 1.0,
            Conductivity::Insulating => -1.0,
        }
    }

    /// `ln|τ|`, accurate when `k` is huge or tiny.
    pub fn ln_abs_tau(self) -> f64 {
        match self {
            Conductivity::Finite(k) if k > 1.0 => (-2.0 / (k + 1.0)).ln_1p(),
            Conductivity::Finite(k) => (-2.0 * k / (k + 1.0)).ln_1p(),
            _ => 0.0,
        }
    }

    pub fn reciprocal(self) -> Self {
        match self {
            Conductivity::Finite(k) => Conductivity::Finite(1.0 / k),
            Conductivity::PerfectlyConducting => Conductivity::Insulating,
            Conductivity::Insulating => Conductivity::PerfectlyConducting,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Conductivity::Finite(k) => k,
            Conductivity::PerfectlyConducting => f64::INFINITY,
            Conductivity::Insulating => 0.0,
        }
    }

    pub fn label(self) -> String {
        match self {
            Conductivity::Finite(k) => format!("{k}"),
            Conductivity::PerfectlyConducting => "inf".into(),
            Conductivity::Insulating => "0".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConductivityPair {
    pub k1: Conductivity,
    pub k2: Conductivity,
}

impl ConductivityPair {
    pub fn new(k1: Conductivity, k2: Conductivity) -> Result<Self> {
        for k in [k1, k2] {
            if let Conductivity::Finite(v) = k {
                Conductivity::finite(v)?;
            }
        }
        Ok(Self { k1, k2 })
    }

    pub fn finite(k1: f64, k2: f64) -> Result<Self> {
        Self::new(Conductivity::finite(k1)?, Conductivity::finite(k2)?)
    }

    pub fn perfect() -> Self {
        Self { k1: Conductivity::PerfectlyConducting, k2: Conductivity::PerfectlyConducting }
    }

    pub fn insulating() -> Self {
        Self { k1: Conductivity::Insulating, k2: Conductivity::Insulating }
    }

    pub fn tau1(&self) -> f64 {
        self.k1.tau()
    }

    pub fn tau2(&self) -> f64 {
        self.k2.tau()
    }

    pub fn tau(&self) -> f64 {
        self.tau1() * self.tau2()
    }

    /// `ln|τ₁τ₂|`.
    pub fn ln_abs_tau(&self) -> f64 {
        self.k1.ln_abs_tau() + self.k2.ln_abs_tau()
    }

    pub fn reciprocal(&self) -> Self {
        Self { k1: self.k1.reciprocal(), k2: self.k2.reciprocal() }
    }
}

/// Linear background potential `H(x, y) = hx·x + hy·y` (canonical frame).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicDrive {
    pub hx: f64,
    pub hy: f64,
}

impl HarmonicDrive {
    pub const fn new(hx: f64, hy: f64) -> Self {
        Self { hx, hy }
    }

    pub fn value(&self, p: CartesianPoint) -> f64 {
        self.hx * p.x + self.hy * p.y
    }

    pub fn gradient(&self) -> Vector2 {
        CartesianPoint::new(self.hx, self.hy)
    }
}

/// Certificate of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub tol: f64,
    /// Terms summed.
    pub n_used: usize,
    /// A-priori bound on the neglected part of `U`.
    pub tail_bound: f64,
    /// Same for the Cartesian gradient, when it was evaluated.
    pub grad_tail_bound: Option<f64>,
}

/// `Σ_{n>N} ρⁿ` and `Σ_{n>N} n ρⁿ` for `ρ = e^{−λ}`.
fn geometric_tails(lambda: f64, n: usize) -> (f64, f64) {
    let rho_n1 = (-(lambda * (n as f64 + 1.0))).exp();
    let one_minus = -(-lambda).exp_m1();
    let rho = 1.0 - one_minus;
    let plain = rho_n1 / one_minus;
    let weighted = rho_n1 * ((n as f64 + 1.0) - n as f64 * rho) / (one_minus * one_minus);
    (plain, weighted)
}

/// Power-series arguments of one branch: `z = e^{s_ξ ξ + i s_θ θ + shift}`.
#[derive(Debug, Clone, Copy)]
struct BranchArgs {
    za: Complex64,
    lambda_a: f64,
    sa: (f64, f64),
    zb: Complex64,
    lambda_b: f64,
    sb: (f64, f64),
}

fn branch_args(bp: BipolarPoint, branch: Branch, xi1: f64, xi2: f64) -> BranchArgs {
    let (xi, th) = (bp.xi, bp.theta);
    let (log_a, sa) = match branch {
        Branch::Inside2 => ((-xi, th), (-1.0, 1.0)),
        _ => ((xi - 2.0 * xi2, th), (1.0, 1.0)),
    };
    let (log_b, sb) = match branch {
        Branch::Inside1 => ((xi, -th), (1.0, -1.0)),
        _ => ((-xi - 2.0 * xi1, -th), (-1.0, -1.0)),
    };
    BranchArgs {
        za: Complex64::new(log_a.0, log_a.1).exp(),
        lambda_a: -log_a.0,
        sa,
        zb: Complex64::new(log_b.0, log_b.1).exp(),
        lambda_b: -log_b.0,
        sb,
    }
}

/// Rescaled coefficients for one conductivity pair and the drive `H = x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    alpha: f64,
    xi1: f64,
    xi2: f64,
    tau1: f64,
    tau2: f64,
    tau: f64,
    /// `Â_n = A_n e^{2nξ₂}` for `n = 1..=len`, stored at index `n − 1`.
    a_hat: Vec<f64>,
    /// `B̂_n = B_n e^{2nξ₁}`.
    b_hat: Vec<f64>,
    /// Bounds `|Â_n| ≤ bound_a`, `|B̂_n| ≤ bound_b`.
    bound_a: f64,
    bound_b: f64,
    c: f64,
    c_tail: f64,
}

/// `(Â_n, B̂_n)` without forming `e^{2n(ξ₁+ξ₂)}`.
fn scaled_coefficients(g: &DiskPairGeometry, k: &ConductivityPair, n: usize) -> (f64, f64) {
    let (t1, t2, t) = (k.tau1(), k.tau2(), k.tau());
    let nf = n as f64;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let expo = k.ln_abs_tau() - 2.0 * nf * (g.xi1 + g.xi2);
    // τE with E = e^{−2n(ξ₁+ξ₂)}, and 1 − τE
    let (tau_e, one_minus) = if t > 0.0 {
        (expo.exp(), -expo.exp_m1())
    } else {
        (-expo.exp(), 1.0 + expo.exp())
    };
    let _ = tau_e;
    let pre = 2.0 * g.alpha * sign / one_minus;
    let a_hat = pre * (-t2 - t * (-2.0 * nf * g.xi1).exp());
    let b_hat = pre * (t1 + t * (-2.0 * nf * g.xi2).exp());
    (a_hat, b_hat)
}

fn check_pair(k: &ConductivityPair) -> Result<()> {
    if k.tau() == 0.0 {
        return Err(invalid("tau = 0: a unit-conductivity inclusion degenerates the series"));
    }
    Ok(())
}

/// `(A_n, B_n)` of the series for `H = x`, in overflow-safe factored form.
pub fn coefficients(g: &DiskPairGeometry, k: &ConductivityPair, n: usize) -> Result<(f64, f64)> {
    check_pair(k)?;
    if n == 0 {
        return Err(invalid("coefficient index starts at 1"));
    }
    let (a_hat, b_hat) = scaled_coefficients(g, k, n);
    let nf = n as f64;
    Ok((a_hat * (-2.0 * nf * g.xi2).exp(), b_hat * (-2.0 * nf * g.xi1).exp()))
}

/// `(A'_n, B'_n)` of the perfectly conducting limit.
pub fn coefficients_perfect(g: &DiskPairGeometry, n: usize) -> Result<(f64, f64)> {
    coefficients(g, &ConductivityPair::perfect(), n)
}

impl CoefficientTable {
    /// Builds a table long enough for every point of the plane to meet
    /// `tol` on both the value and the gradient.
    pub fn new(g: &DiskPairGeometry, k: &ConductivityPair, tol: f64) -> Result<Self> {
        check_pair(k)?;
        if !(tol >= 1e-12 && tol.is_finite()) {
            return Err(invalid(format!("series tolerance must be >= 1e-12, got {tol}")));
        }
        let (t1, t2, t) = (k.tau1(), k.tau2(), k.tau());
        let min_one_minus = if t > 0.0 {
            -(k.ln_abs_tau() - 2.0 * (g.xi1 + g.xi2)).exp_m1()
        } else {
            1.0
        };
        let kk = 2.0 * g.alpha / min_one_minus;
        let mut table = Self {
            alpha: g.alpha,
            xi1: g.xi1,
            xi2: g.xi2,
            tau1: t1,
            tau2: t2,
            tau: t,
            a_hat: Vec::new(),
            b_hat: Vec::new(),
            bound_a: kk * (t2.abs() + t.abs()),
            bound_b: kk * (t1.abs() + t.abs()),
            c: 0.0,
            c_tail: 0.0,
        };
        // worst case over the plane sits on the boundaries at θ = 0
        let mut need = 1;
        for (xi, branches) in [
            (-g.xi1, [Branch::Exterior, Branch::Inside1]),
            (g.xi2, [Branch::Exterior, Branch::Inside2]),
        ] {
            for branch in branches {
                let bp = BipolarPoint::new(xi, 0.0);
                let args = branch_args(bp, branch, g.xi1, g.xi2);
                let scale = bp.cosh_plus_cos() / g.alpha;
                let n = table
                    .required_terms(&args, scale, tol, true)
                    .unwrap_or(MAX_TERMS);
                need = need.max(n);
            }
        }
        let len = (need + 3).min(MAX_TERMS);
        table.a_hat.reserve(len);
        table.b_hat.reserve(len);
        for n in 1..=len {
            let (a, b) = scaled_coefficients(g, k, n);
            table.a_hat.push(a);
            table.b_hat.push(b);
        }
        // C = −Σ (−1)ⁿ (A_n + B_n)
        let mut c = 0.0;
        for n in (1..=len).rev() {
            let nf = n as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            c -= sign
                * (table.a_hat[n - 1] * (-2.0 * nf * g.xi2).exp()
                    + table.b_hat[n - 1] * (-2.0 * nf * g.xi1).exp());
        }
        table.c = c;
        table.c_tail = table.bound_a * geometric_tails(2.0 * g.xi2, len).0
            + table.bound_b * geometric_tails(2.0 * g.xi1, len).0;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.a_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_hat.is_empty()
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn taus(&self) -> (f64, f64, f64) {
        (self.tau1, self.tau2, self.tau)
    }

    /// `(A_n, B_n)` from the table.
    pub fn coefficient(&self, n: usize) -> Option<(f64, f64)> {
        if n == 0 || n > self.len() {
            return None;
        }
        let nf = n as f64;
        Some((
            self.a_hat[n - 1] * (-2.0 * nf * self.xi2).exp(),
            self.b_hat[n - 1] * (-2.0 * nf * self.xi1).exp(),
        ))
    }

    fn tails(&self, args: &BranchArgs, scale: f64, n: usize) -> (f64, f64) {
        let (pa, wa) = geometric_tails(args.lambda_a, n);
        let (pb, wb) = geometric_tails(args.lambda_b, n);
        let value = self.bound_a * pa + self.bound_b * pb + self.c_tail;
        let grad = scale * (self.bound_a * wa + self.bound_b * wb);
        (value, grad)
    }

    fn required_terms(&self, args: &BranchArgs, scale: f64, tol: f64, grad: bool) -> Option<usize> {
        let ok = |n: usize| {
            let (v, gr) = self.tails(args, scale, n);
            let v = v - self.c_tail;
            v <= tol && (!grad || gr <= tol)
        };
        if ok(1) {
            return Some(1);
        }
        let mut hi = 2;
        while !ok(hi) {
            if hi >= MAX_TERMS {
                return None;
            }
            hi = (hi * 2).min(MAX_TERMS);
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// `U`, `∂U/∂ξ` and `∂U/∂θ` at a point, on the requested branch.
    pub fn evaluate(&self, bp: BipolarPoint, branch: Branch, tol: f64, grad: bool) -> Result<SeriesValue> {
        let args = branch_args(bp, branch, self.xi1, self.xi2);
        if !(args.lambda_a > 0.0 && args.lambda_b > 0.0) {
            return Err(domain(format!(
                "branch {branch:?} does not converge at xi = {}",
                bp.xi
            )));
        }
        let scale = bp.cosh_plus_cos() / self.alpha;
        let need = self.required_terms(&args, scale, tol, grad);
        let n_bound = match need {
            Some(n) if n <= self.len() => n,
            _ => {
                let (v, g) = self.tails(&args, scale, self.len());
                return Err(Error::BudgetExhausted {
                    terms: self.len(),
                    achieved: if grad { v.max(g) } else { v },
                    tol,
                });
            }
        };
        let mut sum_a = Complex64::new(0.0, 0.0);
        let mut sum_b = Complex64::new(0.0, 0.0);
        let mut dsum_a = Complex64::new(0.0, 0.0);
        let mut dsum_b = Complex64::new(0.0, 0.0);
        let mut pow_a = Complex64::new(1.0, 0.0);
        let mut pow_b = Complex64::new(1.0, 0.0);
        let mut small_run = 0;
        let mut n_used = 0;
        for n in 1..=self.len() {
            pow_a *= args.za;
            pow_b *= args.zb;
            let ta = self.a_hat[n - 1] * pow_a;
            let tb = self.b_hat[n - 1] * pow_b;
            sum_a += ta;
            sum_b += tb;
            if grad {
                let nf = n as f64;
                dsum_a += nf * ta;
                dsum_b += nf * tb;
            }
            n_used = n;
            if (ta + tb).norm() < 0.1 * tol {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if n >= n_bound && small_run >= 3 {
                break;
            }
        }
        let (tail_bound, grad_tail) = self.tails(&args, scale, n_used);
        let u = self.c + sum_a + sum_b;
        let i = Complex64::new(0.0, 1.0);
        let d_xi = args.sa.0 * dsum_a + args.sb.0 * dsum_b;
        let d_theta = i * (args.sa.1 * dsum_a + args.sb.1 * dsum_b);
        Ok(SeriesValue {
            u,
            d_xi,
            d_theta,
            truncation: Truncation {
                tol,
                n_used,
                tail_bound,
                grad_tail_bound: grad.then_some(grad_tail),
            },
        })
    }
}

/// Complex series `U` with its bipolar derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub u: Complex64,
    pub d_xi: Complex64,
    pub d_theta: Complex64,
    pub truncation: Truncation,
}

/// One evaluated field point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub position: CartesianPoint,
    pub bipolar: BipolarPoint,
    pub branch: Branch,
    pub u: f64,
    pub grad: Vector2,
    /// `u − H`.
    pub perturbation: f64,
    /// `∇(u − H)`.
    pub grad_perturbation: Vector2,
    /// `∂(u − H)/∂ξ`.
    pub d_xi: f64,
    /// `∂(u − H)/∂θ`.
    pub d_theta: f64,
    pub truncation: Truncation,
}

/// Evaluator of `u` for one geometry, conductivity pair and linear drive.
///
/// Coefficient tables are built once and are immutable, so a solver can be
/// shared across threads.
#[derive(Debug, Clone)]
pub struct FieldSolver {
    geometry: DiskPairGeometry,
    conductivity: ConductivityPair,
    drive: HarmonicDrive,
    tol: f64,
    boundary_tol: f64,
    x_table: Option<CoefficientTable>,
    y_table: Option<CoefficientTable>,
}

impl FieldSolver {
    pub fn new(g: &DiskPairGeometry, k: ConductivityPair, drive: HarmonicDrive, tol: f64) -> Result<Self> {
        check_pair(&k)?;
        if !(drive.hx.is_finite() && drive.hy.is_finite()) {
            return Err(invalid("drive coefficients must be finite"));
        }
        let x_table = if drive.hx != 0.0 { Some(CoefficientTable::new(g, &k, tol)?) } else { None };
        let y_table = if drive.hy != 0.0 {
            Some(CoefficientTable::new(g, &k.reciprocal(), tol)?)
        } else {
            None
        };
        if !(tol >= 1e-12) {
            return Err(invalid(format!("tolerance must be >= 1e-12, got {tol}")));
        }
        Ok(Self {
            geometry: g.clone(),
            conductivity: k,
            drive,
            tol,
            boundary_tol: g.default_boundary_tol(),
            x_table,
            y_table,
        })
    }

    /// Perfectly conducting inclusions under `H = hx·x`.
    pub fn perfect(g: &DiskPairGeometry, drive: HarmonicDrive, tol: f64) -> Result<Self> {
        if drive.hy != 0.0 {
            return Err(invalid("the perfect-conductor solution is built for H = x drives"));
        }
        Self::new(g, ConductivityPair::perfect(), drive, tol)
    }

    pub fn with_boundary_tol(mut self, tol: f64) -> Self {
        self.boundary_tol = tol;
        self
    }

    pub fn geometry(&self) -> &DiskPairGeometry {
        &self.geometry
    }

    pub fn conductivity(&self) -> ConductivityPair {
        self.conductivity
    }

    pub fn drive(&self) -> HarmonicDrive {
        self.drive
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn x_table(&self) -> Option<&CoefficientTable> {
        self.x_table.as_ref()
    }

    pub fn region(&self, pt: CartesianPoint) -> Region {
        self.geometry.classify_region(pt, self.boundary_tol)
    }

    /// Evaluates at a Cartesian point; boundary points use the exterior
    /// limit.
    pub fn evaluate(&self, pt: CartesianPoint) -> Result<FieldSample> {
        let branch = self.region(pt).default_branch();
        self.evaluate_on(pt, branch)
    }

    /// Evaluates with an explicitly chosen analytic branch.
    pub fn evaluate_on(&self, pt: CartesianPoint, branch: Branch) -> Result<FieldSample> {
        let bp = self.geometry.to_bipolar(pt)?;
        self.evaluate_full(pt, bp, branch, true)
    }

    /// Evaluates at a point given in bipolar coordinates.
    pub fn evaluate_bipolar(&self, bp: BipolarPoint, branch: Branch) -> Result<FieldSample> {
        let pt = self.geometry.to_cartesian(bp)?;
        self.evaluate_full(pt, bp, branch, true)
    }

    /// Value only; the truncation then targets `u` alone.
    pub fn evaluate_value(&self, pt: CartesianPoint) -> Result<(f64, Truncation)> {
        let bp = self.geometry.to_bipolar(pt)?;
        let branch = self.region(pt).default_branch();
        let s = self.evaluate_full(pt, bp, branch, false)?;
        Ok((s.u, s.truncation))
    }

    fn evaluate_full(&self, pt: CartesianPoint, bp: BipolarPoint, branch: Branch, grad: bool) -> Result<FieldSample> {
        let mut pert = 0.0;
        let mut d_xi = 0.0;
        let mut d_theta = 0.0;
        let mut trunc = Truncation { tol: self.tol, n_used: 0, tail_bound: 0.0, grad_tail_bound: grad.then_some(0.0) };
        let mut merge = |t: Truncation, weight: f64| {
            trunc.n_used = trunc.n_used.max(t.n_used);
            trunc.tail_bound += weight * t.tail_bound;
            if let (Some(acc), Some(g)) = (trunc.grad_tail_bound.as_mut(), t.grad_tail_bound) {
                *acc += weight * g;
            }
        };
        if let Some(table) = &self.x_table {
            let s = table.evaluate(bp, branch, self.tol, grad)?;
            let h = self.drive.hx;
            pert += h * s.u.re;
            d_xi += h * s.d_xi.re;
            d_theta += h * s.d_theta.re;
            merge(s.truncation, h.abs());
        }
        if let Some(table) = &self.y_table {
            let s = table.evaluate(bp, branch, self.tol, grad)?;
            let h = self.drive.hy;
            pert += h * s.u.im;
            d_xi += h * s.d_xi.im;
            d_theta += h * s.d_theta.im;
            merge(s.truncation, h.abs());
        }
        let grad_pert = if grad {
            self.geometry.cartesian_gradient(d_xi, d_theta, bp)
        } else {
            CartesianPoint::default()
        };
        let hgrad = self.drive.gradient();
        Ok(FieldSample {
            position: pt,
            bipolar: bp,
            branch,
            u: self.drive.value(pt) + pert,
            grad: if grad { grad_pert + hgrad } else { CartesianPoint::default() },
            perturbation: pert,
            grad_perturbation: grad_pert,
            d_xi,
            d_theta,
            truncation: trunc,
        })
    }

    /// Exterior-side normal and tangential derivatives of `u − H` on `∂B_j`
    /// at bipolar angle `theta`.
    pub fn boundary_derivatives(&self, j: usize, theta: f64) -> Result<(f64, f64)> {
        let bp = BipolarPoint::new(self.geometry.boundary_level(j), theta);
        let s = self.evaluate_bipolar(bp, Branch::Exterior)?;
        Ok(self.geometry.normal_tangential(s.d_xi, s.d_theta, bp))
    }

    /// `|∇u|` on the exterior side of `x_j`.
    pub fn gradient_at_closest_point(&self, j: usize) -> Result<f64> {
        let bp = BipolarPoint::new(self.geometry.boundary_level(j), 0.0);
        Ok(self.evaluate_bipolar(bp, Branch::Exterior)?.grad.norm())
    }
}

/// One-shot evaluation of `u` and `∇u`.
pub fn evaluate_u(
    pt: CartesianPoint,
    g: &DiskPairGeometry,
    k: ConductivityPair,
    drive: HarmonicDrive,
    tol: f64,
) -> Result<FieldSample> {
    FieldSolver::new(g, k, drive, tol)?.evaluate(pt)
}

/// One-shot evaluation of the perfect-conductor solution for `H = hx·x`.
pub fn evaluate_u_infinity(
    pt: CartesianPoint,
    g: &DiskPairGeometry,
    drive: HarmonicDrive,
    tol: f64,
) -> Result<FieldSample> {
    FieldSolver::perfect(g, drive, tol)?.evaluate(pt)
}
