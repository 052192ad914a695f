//! The three constant-curvature planes, as seen by the optimizers.

use std::f64::consts::TAU;
use std::fmt::Debug;
use std::ops::{Add, Mul};

use rand::Rng;

use crate::geometry::{
    cross3, distance_gradient, dot3, lobachevsky_distance, lobachevsky_exp, norm3, sphere_distance,
    EuclideanPoint, HyperbolicPolar, LobachevskyPoint, SpherePoint, Tangent2,
};
use crate::layout::{Coords, Geometry};

/// Size of the random nudge applied to degenerate pairs.
pub const JITTER: f64 = 1e-6;

/// Ambient 3-vector, used for tangent vectors of the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }
}

/// A geometry the stress optimizers can move points in.
pub trait Space {
    const GEOMETRY: Geometry;
    type Point: Copy + Debug + PartialEq + Default + Send + Sync;
    type Tangent: Copy + Debug + Default + Add<Output = Self::Tangent> + Mul<f64, Output = Self::Tangent>;

    fn distance(a: Self::Point, b: Self::Point) -> f64;

    /// Unit tangent at `a` along the geodesic toward `b`, or `None` when the
    /// direction is undefined (coincident points, or antipodes on the sphere).
    fn toward(a: Self::Point, b: Self::Point) -> Option<Self::Tangent>;

    /// Follows the geodesic through `a` with velocity `v` for time `t`.
    fn exp(a: Self::Point, v: Self::Tangent, t: f64) -> Self::Point;

    /// Moves `a` by [`JITTER`] in a random direction.
    fn jitter<R: Rng + ?Sized>(a: Self::Point, rng: &mut R) -> Self::Point;

    /// Uniform sample, with respect to area, from the disk of radius one
    /// about the base point.
    fn sample_unit_disk<R: Rng + ?Sized>(rng: &mut R) -> Self::Point;

    fn wrap(points: Vec<Self::Point>) -> Coords;

    fn unwrap(coords: &Coords) -> Option<&[Self::Point]>;
}

pub struct HyperbolicSpace;
pub struct SphericalSpace;
pub struct EuclideanSpace;

impl Space for HyperbolicSpace {
    const GEOMETRY: Geometry = Geometry::Hyperbolic;
    type Point = LobachevskyPoint;
    type Tangent = Tangent2;

    fn distance(a: LobachevskyPoint, b: LobachevskyPoint) -> f64 {
        lobachevsky_distance(a, b)
    }

    fn toward(a: LobachevskyPoint, b: LobachevskyPoint) -> Option<Tangent2> {
        let g = distance_gradient(a, b);
        (g != Tangent2::default()).then(|| g * -1.0)
    }

    fn exp(a: LobachevskyPoint, v: Tangent2, t: f64) -> LobachevskyPoint {
        lobachevsky_exp(a, v * t)
    }

    fn jitter<R: Rng + ?Sized>(a: LobachevskyPoint, rng: &mut R) -> LobachevskyPoint {
        let (s, c) = rng.gen_range(0.0..TAU).sin_cos();
        lobachevsky_exp(a, Tangent2::new(c / a.v.cosh(), s) * JITTER)
    }

    fn sample_unit_disk<R: Rng + ?Sized>(rng: &mut R) -> LobachevskyPoint {
        // CDF of the radius is (cosh ρ - 1) / (cosh 1 - 1).
        let u: f64 = rng.gen();
        let rho = (1.0 + u * (1f64.cosh() - 1.0)).acosh();
        let theta = rng.gen_range(0.0..TAU);
        LobachevskyPoint::from_polar(HyperbolicPolar::new(rho, theta))
    }

    fn wrap(points: Vec<LobachevskyPoint>) -> Coords {
        Coords::Hyperbolic(points)
    }

    fn unwrap(coords: &Coords) -> Option<&[LobachevskyPoint]> {
        match coords {
            Coords::Hyperbolic(p) => Some(p),
            _ => None,
        }
    }
}

impl Space for SphericalSpace {
    const GEOMETRY: Geometry = Geometry::Spherical;
    type Point = SpherePoint;
    type Tangent = Vec3;

    fn distance(a: SpherePoint, b: SpherePoint) -> f64 {
        sphere_distance(a, b)
    }

    fn toward(a: SpherePoint, b: SpherePoint) -> Option<Vec3> {
        let (pa, pb) = (a.coords(), b.coords());
        let c = dot3(pa, pb);
        let w = [pb[0] - c * pa[0], pb[1] - c * pa[1], pb[2] - c * pa[2]];
        let n = norm3(w);
        (n > 1e-12).then(|| Vec3(w) * (1.0 / n))
    }

    fn exp(a: SpherePoint, v: Vec3, t: f64) -> SpherePoint {
        let len = norm3(v.0);
        if len == 0.0 || t == 0.0 {
            return a;
        }
        let s = t * len;
        let (sn, cs) = s.sin_cos();
        let p = a.coords();
        let q = [
            cs * p[0] + sn * v.0[0] / len,
            cs * p[1] + sn * v.0[1] / len,
            cs * p[2] + sn * v.0[2] / len,
        ];
        SpherePoint::new(q).unwrap_or(a)
    }

    fn jitter<R: Rng + ?Sized>(a: SpherePoint, rng: &mut R) -> SpherePoint {
        let p = a.coords();
        // A random unit tangent: rotate a fixed tangent basis by a random angle.
        let helper = if p[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let e1 = cross3(p, helper);
        let n1 = norm3(e1);
        let e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
        let e2 = cross3(p, e1);
        let (s, c) = rng.gen_range(0.0..TAU).sin_cos();
        let v = Vec3([c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]]);
        Self::exp(a, v, JITTER)
    }

    fn sample_unit_disk<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint {
        // Spherical cap of geodesic radius one about the north pole.
        let u: f64 = rng.gen();
        let polar = (1.0 - u * (1.0 - 1f64.cos())).acos();
        let azimuth = rng.gen_range(0.0..TAU);
        SpherePoint::from_angles(polar, azimuth)
    }

    fn wrap(points: Vec<SpherePoint>) -> Coords {
        Coords::Spherical(points)
    }

    fn unwrap(coords: &Coords) -> Option<&[SpherePoint]> {
        match coords {
            Coords::Spherical(p) => Some(p),
            _ => None,
        }
    }
}

impl Space for EuclideanSpace {
    const GEOMETRY: Geometry = Geometry::Euclidean;
    type Point = EuclideanPoint;
    type Tangent = Tangent2;

    fn distance(a: EuclideanPoint, b: EuclideanPoint) -> f64 {
        a.distance(b)
    }

    fn toward(a: EuclideanPoint, b: EuclideanPoint) -> Option<Tangent2> {
        let d = a.distance(b);
        (d > 0.0).then(|| Tangent2::new((b.x - a.x) / d, (b.y - a.y) / d))
    }

    fn exp(a: EuclideanPoint, v: Tangent2, t: f64) -> EuclideanPoint {
        EuclideanPoint::new(a.x + t * v.du, a.y + t * v.dv)
    }

    fn jitter<R: Rng + ?Sized>(a: EuclideanPoint, rng: &mut R) -> EuclideanPoint {
        let (s, c) = rng.gen_range(0.0..TAU).sin_cos();
        EuclideanPoint::new(a.x + JITTER * c, a.y + JITTER * s)
    }

    fn sample_unit_disk<R: Rng + ?Sized>(rng: &mut R) -> EuclideanPoint {
        let r = rng.gen::<f64>().sqrt();
        EuclideanPoint::from_polar(r, rng.gen_range(0.0..TAU))
    }

    fn wrap(points: Vec<EuclideanPoint>) -> Coords {
        Coords::Euclidean(points)
    }

    fn unwrap(coords: &Coords) -> Option<&[EuclideanPoint]> {
        match coords {
            Coords::Euclidean(p) => Some(p),
            _ => None,
        }
    }
}
