//! Oracles and property checks shared by the property suites and the
//! acceptance target. Nothing here calls into the code path it checks
//! except through the public entry points under test.
#![allow(dead_code)]

use std::f64::consts::PI;

use hyperlay::geometry::{
    distance_gradient, hyperbolic_disk_area, lambert_inverse_radius, lobachevsky_distance, lobachevsky_to_poincare,
    mobius_apply, mobius_unapply, poincare_distance, poincare_to_lobachevsky, poincare_to_polar, polar_to_poincare,
    sphere_distance, EuclideanPoint, HyperbolicPolar, LobachevskyPoint, MobiusTranslation, PoincarePoint, SpherePoint,
};
use hyperlay::{DistanceMatrix, Layout};
use num_complex::Complex64;
use rand::Rng;

pub fn disk_point<R: Rng>(rng: &mut R, max_radius: f64) -> PoincarePoint {
    let r = max_radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(-PI..PI);
    PoincarePoint::new(Complex64::from_polar(r, theta)).unwrap()
}

pub fn lob_point<R: Rng>(rng: &mut R, lim: f64) -> LobachevskyPoint {
    LobachevskyPoint::new(rng.gen_range(-lim..=lim), rng.gen_range(-lim..=lim))
}

/// Uniform on the sphere: height uniform in [-1, 1].
pub fn sphere_point<R: Rng>(rng: &mut R) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    SpherePoint::from_angles(z.acos(), rng.gen_range(-PI..PI))
}

pub fn wrap_angle(a: f64) -> f64 {
    let t = a.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

pub fn mobius_isometry_error(z0: PoincarePoint, p: PoincarePoint, q: PoincarePoint) -> f64 {
    let t = MobiusTranslation::to_origin(z0);
    (poincare_distance(mobius_apply(t, p), mobius_apply(t, q)) - poincare_distance(p, q)).abs()
}

pub fn mobius_round_trip_error(z0: PoincarePoint, z: PoincarePoint) -> f64 {
    let t = MobiusTranslation::to_origin(z0);
    (mobius_unapply(t, mobius_apply(t, z)).z() - z.z()).norm()
}

pub fn lob_round_trip_error(a: LobachevskyPoint) -> f64 {
    let back = poincare_to_lobachevsky(lobachevsky_to_poincare(a));
    (back.u - a.u).abs().max((back.v - a.v).abs())
}

/// Disk point from the hyperboloid by stereographic projection from
/// (0, 0, -1). Independent of the library's conversion route.
pub fn oracle_lob_to_disk(a: LobachevskyPoint) -> Complex64 {
    let x = a.u.sinh() * a.v.cosh();
    let y = a.v.sinh();
    let z = a.u.cosh() * a.v.cosh();
    Complex64::new(x / (1.0 + z), y / (1.0 + z))
}

pub fn lob_conversion_error(a: LobachevskyPoint) -> f64 {
    (lobachevsky_to_poincare(a).z() - oracle_lob_to_disk(a)).norm()
}

/// `poincare_to_polar ∘ polar_to_poincare` against the input, and the disk
/// radius against `tanh(ρ/2)` read back through `2 atanh`.
pub fn polar_round_trip_error(hp: HyperbolicPolar) -> f64 {
    let z = polar_to_poincare(hp).unwrap();
    let back = poincare_to_polar(z);
    let via_atanh = 2.0 * z.norm().atanh();
    let angle = if hp.rho > 0.0 { wrap_angle(back.theta - hp.theta).abs() } else { 0.0 };
    (back.rho - hp.rho).abs().max((via_atanh - hp.rho).abs()).max(angle)
}

pub fn distance_equivalence_error(a: LobachevskyPoint, b: LobachevskyPoint) -> f64 {
    (lobachevsky_distance(a, b) - poincare_distance(lobachevsky_to_poincare(a), lobachevsky_to_poincare(b))).abs()
}

/// Relative error, in the Riemannian norm at `a`, between the returned
/// gradient and central differences of the distance with step `1e-6`.
pub fn gradient_fd_error(a: LobachevskyPoint, b: LobachevskyPoint) -> f64 {
    let h = 1e-6;
    let d = |p: LobachevskyPoint| lobachevsky_distance(p, b);
    let du = (d(LobachevskyPoint::new(a.u + h, a.v)) - d(LobachevskyPoint::new(a.u - h, a.v))) / (2.0 * h);
    let dv = (d(LobachevskyPoint::new(a.u, a.v + h)) - d(LobachevskyPoint::new(a.u, a.v - h))) / (2.0 * h);
    let c = a.v.cosh();
    // Raise the index: metric diag(cosh²v, 1).
    let fd = (du / (c * c), dv);
    let g = distance_gradient(a, b);
    let norm = |x: f64, y: f64| (c * x).hypot(y);
    norm(g.du - fd.0, g.dv - fd.1) / norm(fd.0, fd.1)
}

pub fn area_identity_error(r: f64) -> f64 {
    let e = PI * r * r;
    (hyperbolic_disk_area(lambert_inverse_radius(r).unwrap()) - e).abs() / e
}

/// Largest violation among symmetry, identity and the triangle inequality
/// for one triple.
pub fn metric_violation<P: Copy>(d: impl Fn(P, P) -> f64, x: P, y: P, z: P) -> f64 {
    let sym = (d(x, y) - d(y, x)).abs();
    let id = d(x, x).abs().max(d(y, y).abs());
    let tri = (d(x, z) - d(x, y) - d(y, z)).max(0.0);
    let pos = (-d(x, y)).max(0.0);
    sym.max(id).max(tri).max(pos)
}

pub fn poincare_metric(x: PoincarePoint, y: PoincarePoint, z: PoincarePoint) -> f64 {
    metric_violation(poincare_distance, x, y, z)
}

pub fn lob_metric(x: LobachevskyPoint, y: LobachevskyPoint, z: LobachevskyPoint) -> f64 {
    metric_violation(lobachevsky_distance, x, y, z)
}

pub fn sphere_metric(x: SpherePoint, y: SpherePoint, z: SpherePoint) -> f64 {
    metric_violation(sphere_distance, x, y, z)
}

pub fn euclid_metric(x: EuclideanPoint, y: EuclideanPoint, z: EuclideanPoint) -> f64 {
    metric_violation(|a: EuclideanPoint, b| a.distance(b), x, y, z)
}

/// Brute-force stress: full double loop over ordered pairs, halved.
pub fn oracle_stress(l: &Layout, d: &DistanceMatrix, alpha: f64, inverse_square: bool) -> f64 {
    let n = l.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dij = d.get(i, j);
            let w = if inverse_square { 1.0 / (dij * dij) } else { 1.0 };
            let r = l.distance(i, j) - alpha * dij;
            total += w * r * r;
        }
    }
    total / 2.0
}

/// Brute-force distortion over ordered pairs.
pub fn oracle_distortion(l: &Layout, d: &DistanceMatrix) -> f64 {
    let n = l.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += (l.distance(i, j) / l.alpha() - d.get(i, j)).abs() / d.get(i, j);
                count += 1;
            }
        }
    }
    total / count as f64
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
