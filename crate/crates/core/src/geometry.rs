//! Coordinate systems and the hyperbolic kernel.
//!
//! Hyperbolic points live in two models. The Poincaré disk
//! ([`PoincarePoint`]) is used for display and Möbius navigation, while
//! Lobachevsky coordinates ([`LobachevskyPoint`]) are what the optimizers
//! work in: every pair of reals is a valid point, so no projection back into
//! the model is ever needed. Conversions go through the hyperboloid
//! embedding `(sinh u cosh v, sinh v, cosh u cosh v)`.
//!
//! Curvature is fixed at -1 throughout.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Largest hyperbolic radius that is exponentiated without complaint.
pub const MAX_HYPERBOLIC_RADIUS: f64 = 700.0;

/// Slack allowed when clamping arguments of `acosh`/`atanh` back into their
/// domain after rounding.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// The largest `f64` strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("point {0} is not strictly inside the unit disk")]
    OutsideDisk(Complex64),
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),
    #[error("hyperbolic radius {0} exceeds the overflow limit of 700")]
    RadiusOverflow(f64),
    #[error("vector ({0}, {1}, {2}) cannot be normalized onto the unit sphere")]
    DegenerateSphereVector(f64, f64, f64),
    #[error("argument {0} is outside the domain of {1}")]
    Domain(f64, &'static str),
    #[error("non-finite coordinate")]
    NonFinite,
}

/// `acosh` with arguments slightly below one clamped to one.
pub fn acosh_clamped(x: f64) -> Result<f64, GeometryError> {
    if x < 1.0 - DOMAIN_SLACK || x.is_nan() {
        return Err(GeometryError::Domain(x, "acosh"));
    }
    Ok(x.max(1.0).acosh())
}

/// `atanh` with arguments just outside (-1, 1) pulled back inside.
pub fn atanh_clamped(x: f64) -> Result<f64, GeometryError> {
    if x.abs() > 1.0 + DOMAIN_SLACK || x.is_nan() {
        return Err(GeometryError::Domain(x, "atanh"));
    }
    Ok(x.clamp(-BELOW_ONE, BELOW_ONE).atanh())
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincarePoint(Complex64);

impl PoincarePoint {
    pub const ORIGIN: PoincarePoint = PoincarePoint(Complex64::new(0.0, 0.0));

    pub fn new(z: Complex64) -> Result<Self, GeometryError> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if z.norm() >= 1.0 {
            return Err(GeometryError::OutsideDisk(z));
        }
        Ok(Self(z))
    }

    pub fn from_xy(x: f64, y: f64) -> Result<Self, GeometryError> {
        Self::new(Complex64::new(x, y))
    }

    /// Builds a point from a value that is mathematically inside the disk but
    /// may have rounded onto or past the boundary.
    pub(crate) fn pulled_inside(z: Complex64) -> Self {
        let r = z.norm();
        if r < 1.0 {
            Self(z)
        } else {
            Self(z * (BELOW_ONE / r))
        }
    }

    /// Scales the point radially so that `|z| <= radius`.
    pub fn clamped(self, radius: f64) -> Self {
        let r = self.0.norm();
        if r <= radius {
            return self;
        }
        // The rescaled norm can round one ulp past `radius`.
        let mut k = radius / r;
        loop {
            let w = self.0 * k;
            if w.norm() <= radius {
                return Self(w);
            }
            k *= 1.0 - f64::EPSILON;
        }
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

impl fmt::Display for PoincarePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Axial coordinates: `u` runs along a fixed geodesic axis, `v` is the signed
/// perpendicular distance to it. The axis is the real diameter of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LobachevskyPoint {
    pub u: f64,
    pub v: f64,
}

impl LobachevskyPoint {
    pub const ORIGIN: LobachevskyPoint = LobachevskyPoint { u: 0.0, v: 0.0 };

    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    /// Point on the hyperboloid `x² + y² - z² = -1, z > 0`.
    pub fn to_hyperboloid(self) -> [f64; 3] {
        let cv = self.v.cosh();
        [self.u.sinh() * cv, self.v.sinh(), self.u.cosh() * cv]
    }

    /// Inverse of [`to_hyperboloid`](Self::to_hyperboloid); only `x` and `y`
    /// are read, which keeps points on the sheet regardless of drift in `z`.
    pub fn from_hyperboloid(p: [f64; 3]) -> Self {
        let v = p[1].asinh();
        let u = (p[0] / p[1].hypot(1.0)).asinh();
        Self { u, v }
    }

    pub fn to_polar(self) -> HyperbolicPolar {
        let rho = lobachevsky_distance(LobachevskyPoint::ORIGIN, self);
        let theta = self.v.sinh().atan2(self.u.sinh() * self.v.cosh());
        HyperbolicPolar::new(rho, theta)
    }

    pub fn from_polar(hp: HyperbolicPolar) -> Self {
        let (s, c) = hp.theta.sin_cos();
        let sr = hp.rho.sinh();
        Self::from_hyperboloid([sr * c, sr * s, hp.rho.cosh()])
    }

    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

/// Geodesic polar coordinates about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPolar {
    pub rho: f64,
    pub theta: f64,
}

impl HyperbolicPolar {
    /// Normalizes `theta` to `[0, 2π)`; a negative `rho` is folded into the
    /// angle.
    pub fn new(rho: f64, theta: f64) -> Self {
        let (rho, theta) = if rho < 0.0 { (-rho, theta + PI) } else { (rho, theta) };
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        Self { rho, theta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint([f64; 3]);

impl Default for SpherePoint {
    fn default() -> Self {
        Self::north()
    }
}

impl SpherePoint {
    pub fn new(p: [f64; 3]) -> Result<Self, GeometryError> {
        let n = norm3(p);
        if !n.is_finite() || n < 1e-300 {
            return Err(GeometryError::DegenerateSphereVector(p[0], p[1], p[2]));
        }
        // Already-unit vectors are kept bit for bit, so stored coordinates
        // survive a write/read cycle unchanged.
        if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(Self(p));
        }
        Ok(Self([p[0] / n, p[1] / n, p[2] / n]))
    }

    pub fn north() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn coords(self) -> [f64; 3] {
        self.0
    }

    /// Spherical polar angle from the north pole and azimuth.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self([sp * ca, sp * sa, cp])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EuclideanPoint {
    pub x: f64,
    pub y: f64,
}

impl EuclideanPoint {
    pub const ORIGIN: EuclideanPoint = EuclideanPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn distance(self, other: EuclideanPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// The disk automorphism `z ↦ (z - z0) / (1 - conj(z0) z)`, carrying `z0` to
/// the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTranslation {
    z0: Complex64,
}

impl MobiusTranslation {
    pub fn new(z0: Complex64) -> Result<Self, GeometryError> {
        PoincarePoint::new(z0).map(Self::to_origin)
    }

    pub fn to_origin(p: PoincarePoint) -> Self {
        Self { z0: p.z() }
    }

    pub fn identity() -> Self {
        Self { z0: Complex64::new(0.0, 0.0) }
    }

    pub fn z0(&self) -> Complex64 {
        self.z0
    }
}

pub fn mobius_apply(t: MobiusTranslation, z: PoincarePoint) -> PoincarePoint {
    let z = z.z();
    let w = (z - t.z0) / (Complex64::new(1.0, 0.0) - t.z0.conj() * z);
    PoincarePoint::pulled_inside(w)
}

/// Inverse of [`mobius_apply`]: `y ↦ (y + z0) / (1 + conj(z0) y)`.
pub fn mobius_unapply(t: MobiusTranslation, y: PoincarePoint) -> PoincarePoint {
    let y = y.z();
    let w = (y + t.z0) / (Complex64::new(1.0, 0.0) + t.z0.conj() * y);
    PoincarePoint::pulled_inside(w)
}

/// `1 - |z|²` without cancellation near the boundary.
fn conformal_gap(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// Hyperbolic distance in the disk. Equal to `2 atanh |f(q)|` for the
/// translation `f` taking `p` to the origin; evaluated as
/// `2 asinh(|p - q| / sqrt((1 - |p|²)(1 - |q|²)))`, which stays accurate for
/// nearby points.
pub fn poincare_distance(p: PoincarePoint, q: PoincarePoint) -> f64 {
    let num = (p.z() - q.z()).norm();
    if num == 0.0 {
        return 0.0;
    }
    let den = (conformal_gap(p.z()) * conformal_gap(q.z())).sqrt();
    2.0 * (num / den).asinh()
}

/// `sinh²(d/2)` for two points in Lobachevsky coordinates. Every term is
/// non-negative so the value is free of cancellation.
fn half_sinh_sq(a: LobachevskyPoint, b: LobachevskyPoint) -> f64 {
    let su = ((a.u - b.u) * 0.5).sinh();
    let sv = ((a.v - b.v) * 0.5).sinh();
    a.v.cosh() * b.v.cosh() * su * su + sv * sv
}

/// Closed form `cosh d = cosh(u₁-u₂) cosh v₁ cosh v₂ - sinh v₁ sinh v₂`,
/// rearranged into half-angle form.
pub fn lobachevsky_distance(a: LobachevskyPoint, b: LobachevskyPoint) -> f64 {
    2.0 * half_sinh_sq(a, b).sqrt().asinh()
}

/// Tangent vector at a point in Lobachevsky coordinates, expressed in the
/// coordinate basis `(∂u, ∂v)`. The metric is `cosh²v du² + dv²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tangent2 {
    pub du: f64,
    pub dv: f64,
}

impl Tangent2 {
    pub fn new(du: f64, dv: f64) -> Self {
        Self { du, dv }
    }

    /// Riemannian length at `at`.
    pub fn norm_at(self, at: LobachevskyPoint) -> f64 {
        (at.v.cosh() * self.du).hypot(self.dv)
    }

    pub fn scale(self, k: f64) -> Self {
        Self { du: self.du * k, dv: self.dv * k }
    }

    pub fn add(self, o: Tangent2) -> Self {
        Self { du: self.du + o.du, dv: self.dv + o.dv }
    }
}

impl std::ops::Add for Tangent2 {
    type Output = Tangent2;
    fn add(self, o: Tangent2) -> Tangent2 {
        Tangent2::add(self, o)
    }
}

impl std::ops::Mul<f64> for Tangent2 {
    type Output = Tangent2;
    fn mul(self, k: f64) -> Tangent2 {
        self.scale(k)
    }
}

/// Riemannian gradient of `d(a, b)` with respect to `a`, normalized to unit
/// length. It points away from `b`. Returns the zero vector when `a == b`.
pub fn distance_gradient(a: LobachevskyPoint, b: LobachevskyPoint) -> Tangent2 {
    let s = half_sinh_sq(a, b);
    if s <= 0.0 {
        return Tangent2::default();
    }
    // d = 2 asinh(sqrt S)  =>  dd/dS = 2 / sinh d
    let sinh_d = 2.0 * s.sqrt() * (1.0 + s).sqrt();
    let du = a.u - b.u;
    let dv = a.v - b.v;
    let su = (du * 0.5).sinh();
    let (cva, cvb) = (a.v.cosh(), b.v.cosh());
    let ds_du = 0.5 * cva * cvb * du.sinh();
    let ds_dv = a.v.sinh() * cvb * su * su + 0.5 * dv.sinh();
    let gu = 2.0 * ds_du / sinh_d;
    let gv = 2.0 * ds_dv / sinh_d;
    let grad = Tangent2::new(gu / (cva * cva), gv);
    let n = grad.norm_at(a);
    if n > 0.0 && n.is_finite() {
        grad.scale(1.0 / n)
    } else {
        Tangent2::default()
    }
}

/// Exponential map at `a`: follows the geodesic with initial velocity `v`
/// for unit time.
pub fn lobachevsky_exp(a: LobachevskyPoint, v: Tangent2) -> LobachevskyPoint {
    let len = v.norm_at(a);
    if len == 0.0 || !len.is_finite() {
        return a;
    }
    let (su, cu) = (a.u.sinh(), a.u.cosh());
    let (sv, cv) = (a.v.sinh(), a.v.cosh());
    let p = [su * cv, sv, cu * cv];
    let e_u = [cu * cv, 0.0, su * cv];
    let e_v = [su * sv, cv, cu * sv];
    let (ch, sh) = (len.cosh(), len.sinh() / len);
    let mut q = [0.0; 3];
    for k in 0..3 {
        q[k] = ch * p[k] + sh * (v.du * e_u[k] + v.dv * e_v[k]);
    }
    LobachevskyPoint::from_hyperboloid(q)
}

pub fn lobachevsky_to_poincare(a: LobachevskyPoint) -> PoincarePoint {
    let hp = a.to_polar();
    let r = (hp.rho * 0.5).tanh();
    PoincarePoint::pulled_inside(Complex64::from_polar(r, hp.theta))
}

pub fn poincare_to_lobachevsky(p: PoincarePoint) -> LobachevskyPoint {
    let rho = 2.0 * p.norm().atanh();
    LobachevskyPoint::from_polar(HyperbolicPolar::new(rho, p.z().arg()))
}

/// Checked variant of [`poincare_to_lobachevsky`] for raw disk coordinates.
pub fn disk_to_lobachevsky(z: Complex64) -> Result<LobachevskyPoint, GeometryError> {
    PoincarePoint::new(z).map(poincare_to_lobachevsky)
}

/// Geodesic distance on the unit sphere, in `[0, π]`.
pub fn sphere_distance(p: SpherePoint, q: SpherePoint) -> f64 {
    let (a, b) = (p.0, q.0);
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    let cross = norm3(cross3(a, b));
    cross.atan2(dot)
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Radius rule of the inverse hyperbolic Lambert azimuthal projection:
/// the hyperbolic disk of radius `f(r)` has the area of the Euclidean disk
/// of radius `r`. `f(r) = acosh(r²/2 + 1)`, computed as `2 asinh(r/2)`.
pub fn lambert_inverse_radius(r: f64) -> Result<f64, GeometryError> {
    if r < 0.0 || r.is_nan() {
        return Err(GeometryError::NegativeRadius(r));
    }
    Ok(2.0 * (0.5 * r).asinh())
}

/// Forward Lambert rule, the inverse of [`lambert_inverse_radius`].
pub fn lambert_radius(rho: f64) -> f64 {
    2.0 * (0.5 * rho).sinh()
}

/// Area of a hyperbolic disk, `2π(cosh r - 1)`.
pub fn hyperbolic_disk_area(r: f64) -> f64 {
    let s = (0.5 * r).sinh();
    4.0 * PI * s * s
}

pub fn euclidean_disk_area(r: f64) -> f64 {
    PI * r * r
}

/// `(ρ, θ) ↦ (tanh(ρ/2), θ)`. Values that round to the boundary are pulled
/// back to the largest representable radius below one.
pub fn polar_to_poincare(hp: HyperbolicPolar) -> Result<PoincarePoint, GeometryError> {
    if hp.rho < 0.0 || hp.rho.is_nan() {
        return Err(GeometryError::NegativeRadius(hp.rho));
    }
    if hp.rho > MAX_HYPERBOLIC_RADIUS {
        return Err(GeometryError::RadiusOverflow(hp.rho));
    }
    let r = (0.5 * hp.rho).tanh().min(BELOW_ONE);
    Ok(PoincarePoint::pulled_inside(Complex64::from_polar(r, hp.theta)))
}

pub fn poincare_to_polar(p: PoincarePoint) -> HyperbolicPolar {
    HyperbolicPolar::new(2.0 * p.norm().atanh(), p.z().arg())
}
