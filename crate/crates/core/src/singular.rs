//! The singular function `q`, the decomposition residual `u_b` and the
//! boundary blow-up profiles.
//!
//! With `L(z; β) = −zΦ(−z, 1, β+1)`,
//!
//! ```text
//! 2q = (τ₁+τ) L(e^{−(ξ+iθ)−2ξ₁}) − (τ₂+τ) L(e^{ξ+iθ−2ξ₂})     outside both disks
//! 2q = (τ₁+τ) L(e^{ξ−iθ})        − (τ₂+τ) L(e^{ξ+iθ−2ξ₂})     in B₁
//! 2q = (τ₁+τ) L(e^{−(ξ+iθ)−2ξ₁}) − (τ₂+τ) L(e^{−ξ+iθ})        in B₂
//! ```
//!
//! For an argument `z = e^{s_ξ ξ + i s_θ θ + const}` the identity
//! `P = −z ∂L/∂z` gives `∂L/∂ξ = −s_ξ P(z)` and `∂L/∂θ = −i s_θ P(z)`, so the
//! gradient of `q` costs no extra Φ evaluation.
//!
//! Highly conducting pairs (`k₁, k₂ > 1`) decompose as
//! `u = c_n Re q(·; β, τ₁, τ₂) + H + u_b`; almost insulating pairs
//! (`k₁, k₂ < 1`) as `u = c_t Im q(·; β, −τ₁, −τ₂) + H + u_b`, with `∇u_b`
//! bounded independently of the gap and the contrast.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{BipolarPoint, Branch, CartesianPoint, DiskPairGeometry, Vector2};
use crate::lerch::{cap_l, cap_l_and_p, cap_p, EvalBudget};
use crate::series::{ConductivityPair, FieldSolver, HarmonicDrive};

/// Tolerance used for every Lerch evaluation behind `q`.
pub const LERCH_TOL: f64 = 1e-13;

/// Which decomposition theorem applies to a conductivity pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `k₁, k₂ > 1`: `c_n Re q(·; β, τ₁, τ₂)`.
    Conducting,
    /// `k₁, k₂ < 1`: `c_t Im q(·; β, −τ₁, −τ₂)`.
    Insulating,
    /// One inclusion on each side of the background conductivity.
    Mixed,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Conducting => "conducting",
            Regime::Insulating => "insulating",
            Regime::Mixed => "mixed",
        }
    }
}

/// Parameters of `q` together with the drive amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularParams {
    pub beta: f64,
    /// The contrasts entered into `q` (negated in the insulating regime).
    pub tau1: f64,
    pub tau2: f64,
    pub tau: f64,
    pub c_n: f64,
    pub c_t: f64,
    /// Limit of `q` at infinity.
    pub c_q: Complex64,
    pub regime: Regime,
}

impl SingularParams {
    /// `false` when the decomposition theorems do not cover the pair.
    pub fn within_theorem(&self) -> bool {
        self.regime != Regime::Mixed
    }

    /// Amplitude multiplying the singular part: `c_t` for insulating pairs,
    /// `c_n` otherwise.
    pub fn amplitude(&self) -> f64 {
        match self.regime {
            Regime::Insulating => self.c_t,
            _ => self.c_n,
        }
    }

    /// The part of `q` that enters the decomposition.
    pub fn part(&self, q: Complex64) -> f64 {
        match self.regime {
            Regime::Insulating => q.im,
            _ => q.re,
        }
    }

    /// `|τ₁| + |τ₂| + 2τ`, the weight of the blow-up profile.
    pub fn profile_weight(&self) -> f64 {
        self.tau1.abs() + self.tau2.abs() + 2.0 * self.tau
    }
}

/// `β = r_*(−ln τ)/(4√ε)` and the constant `C_q` for explicit contrasts.
pub fn params_from_taus(
    g: &DiskPairGeometry,
    tau1: f64,
    tau2: f64,
    beta: f64,
    d: HarmonicDrive,
    regime: Regime,
) -> Result<SingularParams> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be non-negative, got {beta}")));
    }
    if !(tau1.abs() <= 1.0 && tau2.abs() <= 1.0) {
        return Err(invalid("contrasts must lie in [-1, 1]"));
    }
    let tau = tau1 * tau2;
    let budget = EvalBudget::with_tol(LERCH_TOL)?;
    let l1 = cap_l(Complex64::new(-(-2.0 * g.xi1).exp(), 0.0), beta, &budget)?;
    let l2 = cap_l(Complex64::new(-(-2.0 * g.xi2).exp(), 0.0), beta, &budget)?;
    let rs2 = g.r_star * g.r_star;
    let grad_h = d.gradient();
    Ok(SingularParams {
        beta,
        tau1,
        tau2,
        tau,
        c_n: rs2 * grad_h.dot(g.n),
        c_t: rs2 * grad_h.dot(g.t),
        c_q: 0.5 * ((tau1 + tau) * l1 - (tau2 + tau) * l2),
        regime,
    })
}

/// Parameters of the decomposition for a conductivity pair and drive.
///
/// Mixed pairs are accepted with `regime = Mixed`; `β` then uses `ln|τ|`.
pub fn make_params(g: &DiskPairGeometry, c: &ConductivityPair, d: HarmonicDrive) -> Result<SingularParams> {
    let (t1, t2) = (c.tau1(), c.tau2());
    if t1 == 0.0 || t2 == 0.0 {
        return Err(invalid("unit conductivity has no singular part"));
    }
    let regime = if t1 > 0.0 && t2 > 0.0 {
        Regime::Conducting
    } else if t1 < 0.0 && t2 < 0.0 {
        Regime::Insulating
    } else {
        Regime::Mixed
    };
    let (q1, q2) = if regime == Regime::Insulating { (-t1, -t2) } else { (t1, t2) };
    let beta = g.r_star * (-c.ln_abs_tau()) / (4.0 * g.eps.sqrt());
    params_from_taus(g, q1, q2, beta.max(0.0), d, regime)
}

/// `q` with its bipolar and Cartesian derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QValue {
    pub bipolar: BipolarPoint,
    pub branch: Branch,
    pub q: Complex64,
    pub dq_dxi: Complex64,
    pub dq_dtheta: Complex64,
    pub grad_re: Vector2,
    pub grad_im: Vector2,
}

/// Evaluator of `q` for fixed geometry and parameters.
#[derive(Debug, Clone)]
pub struct SingularField {
    geometry: DiskPairGeometry,
    params: SingularParams,
    budget: EvalBudget,
}

impl SingularField {
    pub fn new(g: &DiskPairGeometry, params: SingularParams) -> Result<Self> {
        Ok(Self { geometry: g.clone(), params, budget: EvalBudget::with_tol(LERCH_TOL)? })
    }

    pub fn params(&self) -> &SingularParams {
        &self.params
    }

    pub fn evaluate(&self, pt: CartesianPoint) -> Result<QValue> {
        let branch = self
            .geometry
            .classify_region(pt, self.geometry.default_boundary_tol())
            .default_branch();
        self.evaluate_on(pt, branch)
    }

    pub fn evaluate_on(&self, pt: CartesianPoint, branch: Branch) -> Result<QValue> {
        let bp = self.geometry.to_bipolar(pt)?;
        self.evaluate_bipolar(bp, branch)
    }

    pub fn evaluate_bipolar(&self, bp: BipolarPoint, branch: Branch) -> Result<QValue> {
        let (xi, th) = (bp.xi, bp.theta);
        let (g, p) = (&self.geometry, &self.params);
        // (log z, s_ξ, s_θ) for the two Lerch arguments
        let first = match branch {
            Branch::Inside1 => (Complex64::new(xi, -th), 1.0, -1.0),
            _ => (Complex64::new(-xi - 2.0 * g.xi1, -th), -1.0, -1.0),
        };
        let second = match branch {
            Branch::Inside2 => (Complex64::new(-xi, th), -1.0, 1.0),
            _ => (Complex64::new(xi - 2.0 * g.xi2, th), 1.0, 1.0),
        };
        let w1 = 0.5 * (p.tau1 + p.tau);
        let w2 = -0.5 * (p.tau2 + p.tau);
        let i = Complex64::new(0.0, 1.0);
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq_dxi = Complex64::new(0.0, 0.0);
        let mut dq_dtheta = Complex64::new(0.0, 0.0);
        for ((logz, s_xi, s_th), w) in [(first, w1), (second, w2)] {
            if w == 0.0 {
                continue;
            }
            let (l, pp) = cap_l_and_p(logz.exp(), p.beta, &self.budget)
                .map_err(|e| Error::Domain(format!("branch {branch:?} at xi = {xi}: {e}")))?;
            q += w * l;
            dq_dxi += -w * s_xi * pp;
            dq_dtheta += -w * s_th * i * pp;
        }
        Ok(QValue {
            bipolar: bp,
            branch,
            q,
            dq_dxi,
            dq_dtheta,
            grad_re: g.cartesian_gradient(dq_dxi.re, dq_dtheta.re, bp),
            grad_im: g.cartesian_gradient(dq_dxi.im, dq_dtheta.im, bp),
        })
    }
}

/// One-shot evaluation of `q` and the gradients of its real and imaginary
/// parts.
pub fn evaluate_q(pt: CartesianPoint, g: &DiskPairGeometry, params: &SingularParams) -> Result<QValue> {
    SingularField::new(g, *params)?.evaluate(pt)
}

/// `u`, its singular part and the residual `u_b` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSample {
    pub position: CartesianPoint,
    pub bipolar: BipolarPoint,
    pub branch: Branch,
    pub u: f64,
    pub grad_u: Vector2,
    pub q: Complex64,
    /// `c·Re q` or `c·Im q`, whichever the regime uses.
    pub singular: f64,
    pub grad_singular: Vector2,
    pub ub: f64,
    pub grad_ub: Vector2,
}

/// Exact solution and singular function for one configuration.
#[derive(Debug, Clone)]
pub struct Decomposition {
    solver: FieldSolver,
    singular: SingularField,
}

impl Decomposition {
    /// Fails with [`Error::OutsideTheorem`] for mixed pairs.
    pub fn new(g: &DiskPairGeometry, k: ConductivityPair, d: HarmonicDrive, tol: f64) -> Result<Self> {
        let params = make_params(g, &k, d)?;
        if !params.within_theorem() {
            return Err(Error::OutsideTheorem(format!(
                "conductivities {} and {} lie on opposite sides of 1",
                k.k1.label(),
                k.k2.label()
            )));
        }
        Self::with_params(FieldSolver::new(g, k, d, tol)?, params)
    }

    /// Uses caller-supplied parameters; no theorem check.
    pub fn with_params(solver: FieldSolver, params: SingularParams) -> Result<Self> {
        let singular = SingularField::new(solver.geometry(), params)?;
        Ok(Self { solver, singular })
    }

    pub fn solver(&self) -> &FieldSolver {
        &self.solver
    }

    pub fn singular(&self) -> &SingularField {
        &self.singular
    }

    pub fn params(&self) -> &SingularParams {
        self.singular.params()
    }

    pub fn residual(&self, pt: CartesianPoint) -> Result<ResidualSample> {
        let bp = self.solver.geometry().to_bipolar(pt)?;
        let branch = self.solver.region(pt).default_branch();
        self.residual_bipolar(bp, branch)
    }

    pub fn residual_bipolar(&self, bp: BipolarPoint, branch: Branch) -> Result<ResidualSample> {
        let s = self.solver.evaluate_bipolar(bp, branch)?;
        let qv = self.singular.evaluate_bipolar(bp, branch)?;
        let p = self.params();
        let c = p.amplitude();
        let (sx, st) = match p.regime {
            Regime::Insulating => (qv.dq_dxi.im, qv.dq_dtheta.im),
            _ => (qv.dq_dxi.re, qv.dq_dtheta.re),
        };
        let g = self.solver.geometry();
        let singular = c * p.part(qv.q);
        // difference the bipolar partials before mapping, so the large
        // common scale factor multiplies an already-cancelled quantity
        let grad_ub = g.cartesian_gradient(s.d_xi - c * sx, s.d_theta - c * st, bp);
        Ok(ResidualSample {
            position: s.position,
            bipolar: bp,
            branch,
            u: s.u,
            grad_u: s.grad,
            q: qv.q,
            singular,
            grad_singular: g.cartesian_gradient(c * sx, c * st, bp),
            ub: s.perturbation - singular,
            grad_ub,
        })
    }
}

/// Result of evaluating the residual over a point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub sup_grad_ub: f64,
    pub argmax: Option<CartesianPoint>,
    pub samples: Vec<ResidualSample>,
    pub failures: usize,
}

/// Evaluates `u_b` on every grid point (in parallel, results in grid order)
/// and returns `sup |∇u_b|`.
pub fn decompose(
    grid: &[GridPoint],
    g: &DiskPairGeometry,
    k: ConductivityPair,
    d: HarmonicDrive,
    tol: f64,
) -> Result<DecompositionReport> {
    let dec = Decomposition::new(g, k, d, tol)?;
    Ok(decompose_with(&dec, grid))
}

pub fn decompose_with(dec: &Decomposition, grid: &[GridPoint]) -> DecompositionReport {
    let results: Vec<Result<ResidualSample>> =
        grid.par_iter().map(|gp| dec.residual_bipolar(gp.bipolar, gp.branch)).collect();
    let mut samples = Vec::with_capacity(results.len());
    let mut failures = 0;
    let mut sup = 0.0;
    let mut argmax = None;
    for r in results {
        match r {
            Ok(s) if s.grad_ub.is_finite() => {
                let m = s.grad_ub.norm();
                if m > sup {
                    sup = m;
                    argmax = Some(s.position);
                }
                samples.push(s);
            }
            _ => failures += 1,
        }
    }
    DecompositionReport { sup_grad_ub: sup, argmax, samples, failures }
}

/// A grid node given directly in bipolar form with the branch to use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub bipolar: BipolarPoint,
    pub branch: Branch,
}

/// Grid adapted to the gap: exterior levels `ξ` uniform in `[−ξ₁, ξ₂]`
/// (boundaries taken as exterior limits) and, optionally, interior levels
/// `∓ξ_j·s` for a few `s > 1`; `n_theta` angles uniform in `(−π, π)`.
///
/// In Cartesian terms the nodes cluster in the gap at the `√ε` scale, which
/// a fixed rectangular grid cannot resolve as `ε → 0`.
pub fn bipolar_grid(g: &DiskPairGeometry, n_xi: usize, n_theta: usize, interior: bool) -> Result<Vec<GridPoint>> {
    if n_xi < 2 || n_theta < 2 {
        return Err(invalid("grid needs at least two levels and two angles"));
    }
    let thetas = theta_grid(n_theta);
    let mut out = Vec::new();
    let span = g.xi1 + g.xi2;
    for i in 0..n_xi {
        let xi = -g.xi1 + span * i as f64 / (n_xi - 1) as f64;
        for &th in &thetas {
            out.push(GridPoint { bipolar: BipolarPoint::new(xi, th), branch: Branch::Exterior });
        }
    }
    if interior {
        for s in [1.05, 1.25, 1.6, 2.2, 3.0, 5.0] {
            for &th in &thetas {
                out.push(GridPoint { bipolar: BipolarPoint::new(-g.xi1 * s, th), branch: Branch::Inside1 });
                out.push(GridPoint { bipolar: BipolarPoint::new(g.xi2 * s, th), branch: Branch::Inside2 });
            }
        }
    }
    Ok(out)
}

/// `n` angles uniform in `(−π, π)`, excluding both endpoints.
pub fn theta_grid(n: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..n).map(|i| -pi + 2.0 * pi * (i as f64 + 0.5) / n as f64).collect()
}

/// `n` angles uniform in `(−π, π)` that include `θ = 0`.
pub fn theta_grid_with_zero(n: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    let half = n / 2;
    (0..n).map(|i| 2.0 * pi * (i as f64 - half as f64) / (n as f64 + 1.0)).collect()
}

/// Boundary blow-up profiles on `∂B_j` (exterior side).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryProfiles {
    pub j: usize,
    pub thetas: Vec<f64>,
    /// `∂(u−H)/∂ν` on the exterior side.
    pub exact_normal: Vec<f64>,
    /// `∂(u−H)/∂T` on the exterior side.
    pub exact_tangential: Vec<f64>,
    /// Closed-form singular profile `Q_{∂B_j}`.
    pub q_profile: Vec<f64>,
    /// Magnitude of the leading singular term, `|Q_{∂B_j}|`.
    pub corollary_prediction: Vec<f64>,
    /// Normal derivative of the exact singular part `c·Re q` (or `c·Im q`).
    pub singular_normal: Vec<f64>,
    /// Tangential derivative of the same.
    pub singular_tangential: Vec<f64>,
}

impl BoundaryProfiles {
    /// Index of the largest `|exact_normal|`.
    pub fn argmax_normal(&self) -> usize {
        argmax_abs(&self.exact_normal)
    }

    /// `max_θ |exact_normal − Q|`.
    pub fn max_gap_to_q(&self) -> f64 {
        self.exact_normal
            .iter()
            .zip(&self.q_profile)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn argmax_abs(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x.abs() > acc.1 { (i, x.abs()) } else { acc })
        .0
}

/// `Q_{∂B_j}(θ) = −sgn(c_j)·c·(|τ₁|+|τ₂|+2τ)(cosh ξ_j + cos θ)/(2r_*√ε)·Re P(e^{−(ξ_j+iθ)}; β)`
/// where `c` is the regime amplitude and `c_j = ∓ξ_j` the boundary level.
pub fn q_profile(g: &DiskPairGeometry, params: &SingularParams, j: usize, theta: f64) -> Result<f64> {
    let level = g.boundary_level(j);
    let xi_j = level.abs();
    let budget = EvalBudget::with_tol(LERCH_TOL)?;
    let pv = cap_p(Complex64::new(-xi_j, -theta).exp(), params.beta, &budget)?;
    let dd = crate::geometry::cosh_plus_cos(xi_j, theta);
    Ok(-level.signum() * params.amplitude() * params.profile_weight() * dd / (2.0 * g.r_star * g.eps.sqrt())
        * pv.re)
}

/// Exact and singular boundary profiles on `∂B_j` for `theta_grid`.
pub fn boundary_profiles(
    g: &DiskPairGeometry,
    k: ConductivityPair,
    d: HarmonicDrive,
    j: usize,
    thetas: &[f64],
    tol: f64,
) -> Result<BoundaryProfiles> {
    let params = make_params(g, &k, d)?;
    let dec = Decomposition::with_params(FieldSolver::new(g, k, d, tol)?, params)?;
    profiles_with(&dec, j, thetas)
}

pub fn profiles_with(dec: &Decomposition, j: usize, thetas: &[f64]) -> Result<BoundaryProfiles> {
    if !(j == 1 || j == 2) {
        return Err(invalid(format!("boundary index must be 1 or 2, got {j}")));
    }
    if thetas.windows(2).any(|w| w[1] <= w[0]) || thetas.iter().any(|t| !(t.abs() < std::f64::consts::PI)) {
        return Err(invalid("theta grid must be strictly increasing inside (-pi, pi)"));
    }
    let g = dec.solver().geometry();
    let level = g.boundary_level(j);
    let p = *dec.params();
    let rows: Vec<Result<[f64; 6]>> = thetas
        .par_iter()
        .map(|&th| {
            let bp = BipolarPoint::new(level, th);
            let s = dec.solver().evaluate_bipolar(bp, Branch::Exterior)?;
            let qv = dec.singular().evaluate_bipolar(bp, Branch::Exterior)?;
            let (n_exact, t_exact) = g.normal_tangential(s.d_xi, s.d_theta, bp);
            let c = p.amplitude();
            let (sx, st) = match p.regime {
                Regime::Insulating => (qv.dq_dxi.im, qv.dq_dtheta.im),
                _ => (qv.dq_dxi.re, qv.dq_dtheta.re),
            };
            let (n_sing, t_sing) = g.normal_tangential(c * sx, c * st, bp);
            let qp = q_profile(g, &p, j, th)?;
            Ok([n_exact, t_exact, qp, qp.abs(), n_sing, t_sing])
        })
        .collect();
    let mut out = BoundaryProfiles {
        j,
        thetas: thetas.to_vec(),
        exact_normal: Vec::new(),
        exact_tangential: Vec::new(),
        q_profile: Vec::new(),
        corollary_prediction: Vec::new(),
        singular_normal: Vec::new(),
        singular_tangential: Vec::new(),
    };
    for r in rows {
        let [a, b, c, d, e, f] = r?;
        out.exact_normal.push(a);
        out.exact_tangential.push(b);
        out.q_profile.push(c);
        out.corollary_prediction.push(d);
        out.singular_normal.push(e);
        out.singular_tangential.push(f);
    }
    Ok(out)
}

/// `∂(u_k − u_∞)/∂ν` on the exterior side of `∂B_j`, next to its leading
/// singular term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfinityGap {
    pub j: usize,
    pub k: f64,
    pub thetas: Vec<f64>,
    pub exact: Vec<f64>,
    /// `sgn(c_j)·c_n·(cosh ξ_j + cos θ)/(r_*√ε)·β·ln[2(cosh ξ_j + cos θ)]`.
    pub prediction: Vec<f64>,
    /// `|∇(u_k − u_∞)|` on the exterior side.
    pub grad_norm: Vec<f64>,
}

impl InfinityGap {
    pub fn max_grad_norm(&self) -> f64 {
        self.grad_norm.iter().copied().fold(0.0, f64::max)
    }
}

/// Leading singular term of `∂(u_k − u_∞)/∂ν` on `∂B_j` for `k₁ = k₂ = k`
/// and `H = hx·x`.
pub fn infinity_gap_prediction(g: &DiskPairGeometry, k: f64, hx: f64, j: usize, theta: f64) -> Result<f64> {
    let pair = ConductivityPair::finite(k, k)?;
    let beta = g.r_star * (-pair.ln_abs_tau()) / (4.0 * g.eps.sqrt());
    let level = g.boundary_level(j);
    let dd = crate::geometry::cosh_plus_cos(level, theta);
    let c_n = g.r_star * g.r_star * hx * g.n.x;
    Ok(level.signum() * c_n * dd / (g.r_star * g.eps.sqrt()) * beta * (2.0 * dd).ln())
}

/// Exact boundary gap between `u_k` (`k₁ = k₂ = k`) and `u_∞` for `H = x`.
pub fn infinity_gap(g: &DiskPairGeometry, k: f64, j: usize, thetas: &[f64], tol: f64) -> Result<InfinityGap> {
    let drive = HarmonicDrive::new(1.0, 0.0);
    let uk = FieldSolver::new(g, ConductivityPair::finite(k, k)?, drive, tol)?;
    let uinf = FieldSolver::perfect(g, drive, tol)?;
    infinity_gap_with(&uk, &uinf, k, j, thetas)
}

pub fn infinity_gap_with(
    uk: &FieldSolver,
    uinf: &FieldSolver,
    k: f64,
    j: usize,
    thetas: &[f64],
) -> Result<InfinityGap> {
    if !(k > 1.0) {
        return Err(invalid("the gap to the perfect conductor needs k > 1"));
    }
    let g = uk.geometry();
    let level = g.boundary_level(j);
    let rows: Vec<Result<(f64, f64, f64)>> = thetas
        .par_iter()
        .map(|&th| {
            let bp = BipolarPoint::new(level, th);
            let a = uk.evaluate_bipolar(bp, Branch::Exterior)?;
            let b = uinf.evaluate_bipolar(bp, Branch::Exterior)?;
            let (dn, _) = g.normal_tangential(a.d_xi - b.d_xi, a.d_theta - b.d_theta, bp);
            let grad = g.cartesian_gradient(a.d_xi - b.d_xi, a.d_theta - b.d_theta, bp);
            let pred = infinity_gap_prediction(g, k, uk.drive().hx, j, th)?;
            Ok((dn, pred, grad.norm()))
        })
        .collect();
    let mut out = InfinityGap {
        j,
        k,
        thetas: thetas.to_vec(),
        exact: Vec::new(),
        prediction: Vec::new(),
        grad_norm: Vec::new(),
    };
    for r in rows {
        let (a, b, c) = r?;
        out.exact.push(a);
        out.prediction.push(b);
        out.grad_norm.push(c);
    }
    Ok(out)
}

/// Trapezoidal `∫_{∂B_j} ∂(ξ/2π)/∂ν ds`; equals `(−1)^{j+1}`.
pub fn apollonius_charge(g: &DiskPairGeometry, j: usize, n_theta: usize) -> Result<f64> {
    if n_theta < 3 {
        return Err(invalid("need at least three samples"));
    }
    let level = g.boundary_level(j);
    let h = 2.0 * std::f64::consts::PI / n_theta as f64;
    let mut sum = 0.0;
    for th in theta_grid(n_theta) {
        let bp = BipolarPoint::new(level, th);
        let (dn, _) = g.normal_tangential(1.0 / (2.0 * std::f64::consts::PI), 0.0, bp);
        let ds = g.alpha / bp.cosh_plus_cos();
        sum += dn * ds * h;
    }
    Ok(sum)
}
