//! Two-disk geometry and the bipolar coordinate system attached to it.
//!
//! Everything is computed in a canonical frame where the poles sit at
//! `(-α, 0)` and `(α, 0)`, `B₁` lies to the left and `B₂` to the right.
//! A [`Frame`] records the rigid motion back to user coordinates when the
//! geometry is built from arbitrary centers.
//!
//! In this frame a point `z = x + iy` has bipolar coordinates `(ξ, θ)` with
//! `e^{ξ+iθ} = (z + α)/(α − z)`, equivalently `z = α tanh((ξ+iθ)/2)`.
//! The boundary `∂B₁` is the level set `ξ = −ξ₁` and `∂B₂` is `ξ = ξ₂`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{domain, invalid, Result};

/// Evaluation closer than this multiple of `α` to a pole is rejected.
pub const POLE_GUARD: f64 = 1e-12;

/// Default half-width of the boundary band, relative to `min(r₁, r₂)`.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// A point or a vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

/// Direction and gradient vectors share the point representation.
pub type Vector2 = CartesianPoint;

impl CartesianPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Rotation by +π/2.
    pub fn perp(self) -> Self {
        // `0 − y` rather than `−y` keeps a zero component positive
        Self::new(0.0 - self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for CartesianPoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for CartesianPoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<CartesianPoint> for f64 {
    type Output = CartesianPoint;
    fn mul(self, rhs: CartesianPoint) -> CartesianPoint {
        CartesianPoint::new(self * rhs.x, self * rhs.y)
    }
}

impl Neg for CartesianPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Bipolar coordinates, `theta` in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BipolarPoint {
    pub xi: f64,
    pub theta: f64,
}

impl BipolarPoint {
    /// Builds a point, wrapping `theta` into `(−π, π]`.
    pub fn new(xi: f64, theta: f64) -> Self {
        Self { xi, theta: wrap_angle(theta) }
    }

    /// `cosh ξ + cos θ`, evaluated as `2(sinh²(ξ/2) + cos²(θ/2))` so that it
    /// keeps full relative accuracy near the point at infinity `(0, π)`.
    pub fn cosh_plus_cos(self) -> f64 {
        cosh_plus_cos(self.xi, self.theta)
    }
}

pub fn cosh_plus_cos(xi: f64, theta: f64) -> f64 {
    let s = (0.5 * xi).sinh();
    let c = (0.5 * theta).cos();
    2.0 * (s * s + c * c)
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disk {
    pub radius: f64,
    pub center: CartesianPoint,
}

impl Disk {
    pub fn new(radius: f64, center: CartesianPoint) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("disk radius must be positive, got {radius}")));
        }
        if !center.is_finite() {
            return Err(invalid("disk center must be finite"));
        }
        Ok(Self { radius, center })
    }

    /// Point on the circle at polar angle `phi` about the center.
    pub fn boundary_point(&self, phi: f64) -> CartesianPoint {
        self.center + self.radius * CartesianPoint::new(phi.cos(), phi.sin())
    }
}

/// Rigid motion from the canonical frame to user coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frame {
    /// Image of the canonical origin.
    pub origin: CartesianPoint,
    /// Image of the canonical x axis.
    pub axis: Vector2,
}

impl Default for Frame {
    fn default() -> Self {
        Self { origin: CartesianPoint::new(0.0, 0.0), axis: CartesianPoint::new(1.0, 0.0) }
    }
}

impl Frame {
    pub fn to_user(&self, p: CartesianPoint) -> CartesianPoint {
        self.origin + self.vector_to_user(p)
    }

    pub fn to_canonical(&self, p: CartesianPoint) -> CartesianPoint {
        self.vector_to_canonical(p - self.origin)
    }

    pub fn vector_to_user(&self, v: Vector2) -> Vector2 {
        v.x * self.axis + v.y * self.axis.perp()
    }

    pub fn vector_to_canonical(&self, v: Vector2) -> Vector2 {
        CartesianPoint::new(v.dot(self.axis), v.dot(self.axis.perp()))
    }
}

/// Region tag of a field point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    Interior1,
    Interior2,
    Exterior,
    Boundary1,
    Boundary2,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Interior1 => "interior1",
            Region::Interior2 => "interior2",
            Region::Exterior => "exterior",
            Region::Boundary1 => "boundary1",
            Region::Boundary2 => "boundary2",
        }
    }
}

/// One of the three analytic branches of the piecewise field formulas.
///
/// Boundary points belong to the exterior branch unless a one-sided
/// interior limit is requested explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Exterior,
    Inside1,
    Inside2,
}

impl Region {
    pub fn default_branch(self) -> Branch {
        match self {
            Region::Interior1 => Branch::Inside1,
            Region::Interior2 => Branch::Inside2,
            _ => Branch::Exterior,
        }
    }
}

/// Two disjoint disks together with their bipolar data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskPairGeometry {
    pub disk1: Disk,
    pub disk2: Disk,
    pub eps: f64,
    pub alpha: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub p1: CartesianPoint,
    pub p2: CartesianPoint,
    pub r_star: f64,
    pub p: CartesianPoint,
    pub n: Vector2,
    pub t: Vector2,
    pub frame: Frame,
}

impl DiskPairGeometry {
    /// Builds the canonical geometry for radii `r1`, `r2` and gap `eps`.
    pub fn new(r1: f64, r2: f64, eps: f64) -> Result<Self> {
        for (name, v) in [("r1", r1), ("r2", r2), ("eps", eps)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let alpha = (eps * (2.0 * r1 + eps) * (2.0 * r2 + eps) * (2.0 * r1 + 2.0 * r2 + eps)).sqrt()
            / (2.0 * r1 + 2.0 * r2 + 2.0 * eps);
        let xi1 = (alpha / r1).asinh();
        let xi2 = (alpha / r2).asinh();
        // c_j = α((−1)^j coth ξ_j, 0) and α coth ξ_j = sqrt(r_j² + α²)
        let c1 = CartesianPoint::new(-r1.hypot(alpha), 0.0);
        let c2 = CartesianPoint::new(r2.hypot(alpha), 0.0);
        // closest points x_j = ∓α tanh(ξ_j/2), written without cancellation
        let x1 = -alpha * alpha / (r1 + r1.hypot(alpha));
        let x2 = alpha * alpha / (r2 + r2.hypot(alpha));
        let n = CartesianPoint::new(1.0, 0.0);
        Ok(Self {
            disk1: Disk::new(r1, c1)?,
            disk2: Disk::new(r2, c2)?,
            eps,
            alpha,
            xi1,
            xi2,
            p1: CartesianPoint::new(-alpha, 0.0),
            p2: CartesianPoint::new(alpha, 0.0),
            r_star: (2.0 * r1 * r2 / (r1 + r2)).sqrt(),
            p: CartesianPoint::new(0.5 * (x1 + x2), 0.0),
            n,
            t: n.perp(),
            frame: Frame::default(),
        })
    }

    /// Builds the geometry from disks placed anywhere in the plane.
    ///
    /// The returned geometry is canonical; `frame` maps canonical results
    /// back to the caller's coordinates.
    pub fn from_disks(d1: Disk, d2: Disk) -> Result<Self> {
        let sep = d2.center - d1.center;
        let dist = sep.norm();
        let eps = dist - d1.radius - d2.radius;
        if !(eps > 0.0) {
            return Err(invalid(format!("disks must be disjoint, gap = {eps}")));
        }
        let mut g = Self::new(d1.radius, d2.radius, eps)?;
        let axis = (1.0 / dist) * sep;
        g.frame = Frame { origin: d1.center + (-g.disk1.center.x) * axis, axis };
        Ok(g)
    }

    pub fn r1(&self) -> f64 {
        self.disk1.radius
    }

    pub fn r2(&self) -> f64 {
        self.disk2.radius
    }

    pub fn xi_small(&self) -> f64 {
        self.xi1.min(self.xi2)
    }

    pub fn xi_large(&self) -> f64 {
        self.xi1.max(self.xi2)
    }

    pub fn midpoint(&self) -> CartesianPoint {
        self.p
    }

    pub fn disk(&self, j: usize) -> &Disk {
        if j == 1 {
            &self.disk1
        } else {
            &self.disk2
        }
    }

    /// Level `ξ = (−1)^j ξ_j` carrying `∂B_j`.
    pub fn boundary_level(&self, j: usize) -> f64 {
        if j == 1 {
            -self.xi1
        } else {
            self.xi2
        }
    }

    /// Point of `∂B_j` closest to the other disk.
    pub fn closest_point(&self, j: usize) -> CartesianPoint {
        let d = self.disk(j);
        let sign = if j == 1 { 1.0 } else { -1.0 };
        CartesianPoint::new(d.center.x + sign * d.radius, 0.0)
    }

    pub fn default_boundary_tol(&self) -> f64 {
        DEFAULT_BOUNDARY_TOL * self.r1().min(self.r2())
    }

    /// Cartesian → bipolar.
    pub fn to_bipolar(&self, pt: CartesianPoint) -> Result<BipolarPoint> {
        let a = self.alpha;
        let guard = POLE_GUARD * a;
        if pt.distance(self.p1) < guard || pt.distance(self.p2) < guard {
            return Err(domain(format!("point ({}, {}) is at a pole", pt.x, pt.y)));
        }
        if !pt.is_finite() {
            return Err(domain("non-finite point"));
        }
        let (x, y) = (pt.x, pt.y);
        // |z+α|²/|z−α|² = 1 + 4αx/|z−α|²; the log1p form is exact near the
        // y-axis, the plain ratio near either pole
        let d1 = (x + a) * (x + a) + y * y;
        let d2 = (x - a) * (x - a) + y * y;
        let w = 4.0 * a * x / d2;
        let xi = if w.abs() < 0.5 { 0.5 * w.ln_1p() } else { 0.5 * (d1 / d2).ln() };
        let r = pt.norm();
        let theta = (2.0 * a * y).atan2((a - r) * (a + r));
        Ok(BipolarPoint { xi, theta: if theta <= -PI { PI } else { theta } })
    }

    /// Bipolar → Cartesian.
    pub fn to_cartesian(&self, bp: BipolarPoint) -> Result<CartesianPoint> {
        let (xi, theta) = (bp.xi, bp.theta);
        if !(xi.is_finite() && theta.is_finite()) {
            return Err(domain("non-finite bipolar coordinates"));
        }
        let a = self.alpha;
        if xi.abs() > 300.0 {
            let sech = 1.0 / xi.cosh();
            let den = 1.0 + theta.cos() * sech;
            return Ok(CartesianPoint::new(a * xi.tanh() / den, a * theta.sin() * sech / den));
        }
        let d = cosh_plus_cos(xi, theta);
        // (0, π) only reaches D ≈ 1e-32 because π/2 is not representable
        if d < 1e-30 {
            return Err(domain("(ξ, θ) = (0, π) is the point at infinity"));
        }
        Ok(CartesianPoint::new(a * xi.sinh() / d, a * theta.sin() / d))
    }

    /// The metric factor `(cosh ξ + cos θ)/α` of the bipolar system.
    pub fn scale_factor(&self, bp: BipolarPoint) -> f64 {
        bp.cosh_plus_cos() / self.alpha
    }

    pub fn classify_region(&self, pt: CartesianPoint, tol: f64) -> Region {
        let d1 = pt.distance(self.disk1.center) - self.disk1.radius;
        let d2 = pt.distance(self.disk2.center) - self.disk2.radius;
        if d1.abs() <= tol {
            Region::Boundary1
        } else if d2.abs() <= tol {
            Region::Boundary2
        } else if d1 < 0.0 {
            Region::Interior1
        } else if d2 < 0.0 {
            Region::Interior2
        } else {
            Region::Exterior
        }
    }

    /// Region of a point given in bipolar coordinates, using the exact
    /// level sets `ξ = −ξ₁` and `ξ = ξ₂`.
    pub fn branch_of(&self, bp: BipolarPoint) -> Branch {
        if bp.xi < -self.xi1 {
            Branch::Inside1
        } else if bp.xi > self.xi2 {
            Branch::Inside2
        } else {
            Branch::Exterior
        }
    }

    /// Gradient of a scalar given its bipolar partial derivatives.
    pub fn cartesian_gradient(&self, dg_dxi: f64, dg_dtheta: f64, bp: BipolarPoint) -> Vector2 {
        let (e_xi, e_theta) = unit_vectors(bp);
        let h = self.scale_factor(bp);
        h * (dg_dxi * e_xi + dg_dtheta * e_theta)
    }

    /// Outward normal `ν` and tangent `T` of the level circle `ξ = c`
    /// through `bp` (`c = bp.xi ≠ 0`).
    pub fn level_circle_frame(&self, bp: BipolarPoint) -> (Vector2, Vector2) {
        let (e_xi, e_theta) = unit_vectors(bp);
        let s = -bp.xi.signum();
        (s * e_xi, s * e_theta)
    }

    /// Normal and tangential derivatives on the level circle `ξ = c`.
    pub fn normal_tangential(&self, dg_dxi: f64, dg_dtheta: f64, bp: BipolarPoint) -> (f64, f64) {
        let h = -bp.xi.signum() * self.scale_factor(bp);
        (h * dg_dxi, h * dg_dtheta)
    }
}

/// Unit vectors `ê_ξ` and `ê_θ = ê_ξ` rotated by +π/2.
pub fn unit_vectors(bp: BipolarPoint) -> (Vector2, Vector2) {
    let (xi, theta) = (bp.xi, bp.theta);
    let e_xi = if xi.abs() > 300.0 {
        CartesianPoint::new(theta.cos(), -xi.signum() * theta.sin())
    } else {
        let d = cosh_plus_cos(xi, theta);
        CartesianPoint::new(
            (1.0 + xi.cosh() * theta.cos()) / d,
            -xi.sinh() * theta.sin() / d,
        )
    };
    (e_xi, e_xi.perp())
}

/// Reflection (inversion) of `pt` across the circle `∂d`.
pub fn reflect(pt: CartesianPoint, d: &Disk) -> Result<CartesianPoint> {
    let v = pt - d.center;
    let r2 = v.dot(v);
    if r2 == 0.0 {
        return Err(domain("reflection of the disk center is the point at infinity"));
    }
    Ok(d.center + (d.radius * d.radius / r2) * v)
}
