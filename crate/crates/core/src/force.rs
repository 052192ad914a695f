//! Kamada–Kawai layout computed directly in the hyperbolic plane.
//!
//! Each node in turn is moved to the center of the disk by a Möbius
//! translation, the other nodes are laid out in the tangent plane at that
//! node by the radial map `(|y|, θ) ↦ (d_h, θ)`, the node takes one gradient
//! step in the plane, and the result is mapped back.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    lobachevsky_to_poincare, mobius_apply, mobius_unapply, poincare_distance, poincare_to_lobachevsky,
    EuclideanPoint, MobiusTranslation, PoincarePoint,
};
use crate::graph::{apsp, DistanceMatrix, Graph};
use crate::hmds::space::JITTER;
use crate::hmds::{init_layout, HmdsError, InitMode, Schedule, ScheduleKind, TraceRow};
use crate::layout::{Coords, Geometry, Layout, LayoutError};
use crate::projection::DEFAULT_CLAMP;

const STREAM_ORDER: u64 = 4 << 32;
const STREAM_JITTER: u64 = 5 << 32;

#[derive(Debug, Clone, PartialEq)]
pub struct ForceParams {
    /// Maximum number of full passes over the nodes.
    pub max_iterations: usize,
    pub schedule: ScheduleKind,
    /// Stop once no node moves farther than this in a pass.
    pub tolerance: f64,
    /// Largest disk radius any node may occupy.
    pub clamp: f64,
    /// Scale factor on target distances; `None` uses `10 / d_max`.
    pub alpha: Option<f64>,
}

impl Default for ForceParams {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            schedule: ScheduleKind::Exponential,
            tolerance: 1e-3,
            clamp: DEFAULT_CLAMP,
            alpha: None,
        }
    }
}

impl ForceParams {
    pub fn resolved_alpha(&self, d: &DistanceMatrix) -> f64 {
        match self.alpha {
            Some(a) => a,
            None if d.d_max() > 0.0 => 10.0 / d.d_max(),
            None => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceRun {
    pub layout: Layout,
    /// Energy and largest node displacement after each pass.
    pub trace: Vec<TraceRow>,
    pub passes: usize,
}

/// Spring constant `k_ij = d_ij⁻²`.
fn spring(d: f64) -> f64 {
    1.0 / (d * d)
}

fn energy_by(n: usize, dist: impl Fn(usize, usize) -> f64, d: &DistanceMatrix, alpha: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dij = d.get(i, j);
            let r = dist(i, j) - alpha * dij;
            total += 0.5 * spring(dij) * r * r;
        }
    }
    total
}

/// `Σ_{i<j} ½ k_ij (δ_ij - α d_ij)²` with hyperbolic distances `δ` and the
/// layout's scale factor.
pub fn kk_energy(l: &Layout, d: &DistanceMatrix) -> Result<f64, LayoutError> {
    let points = l.hyperbolic_points()?;
    if points.len() != d.len() {
        return Err(LayoutError::SizeMismatch { layout: points.len(), graph: d.len() });
    }
    Ok(energy_by(points.len(), |i, j| l.distance(i, j), d, l.alpha()))
}

/// Image of every node in the tangent plane at `disk[center]`.
///
/// The center goes to the origin. Every other node keeps the angle it has
/// after the Möbius translation and gets its hyperbolic distance to the
/// center as its radius.
pub fn tangent_map(center: usize, disk: &[PoincarePoint]) -> Vec<EuclideanPoint> {
    let c = disk[center];
    let t = MobiusTranslation::to_origin(c);
    disk.iter()
        .map(|&z| {
            let r = poincare_distance(c, z);
            if r == 0.0 {
                EuclideanPoint::ORIGIN
            } else {
                EuclideanPoint::from_polar(r, mobius_apply(t, z).z().arg())
            }
        })
        .collect()
}

/// New disk position for `disk[center]` after it moved to `moved` in its own
/// tangent plane. The intermediate disk radius is capped at `clamp`, and so
/// is the final one.
pub fn tangent_unmap(center: usize, moved: EuclideanPoint, disk: &[PoincarePoint], clamp: f64) -> PoincarePoint {
    let c = disk[center];
    let r = (0.5 * moved.norm()).tanh().min(clamp);
    let y = PoincarePoint::new(Complex64::from_polar(r, moved.angle())).expect("clamp is below one");
    mobius_unapply(MobiusTranslation::to_origin(c), y).clamped(clamp)
}

fn nudge(center: usize, disk: &[PoincarePoint], clamp: f64, rng: &mut impl Rng) -> PoincarePoint {
    let moved = EuclideanPoint::from_polar(JITTER, rng.gen_range(0.0..TAU));
    tangent_unmap(center, moved, disk, clamp)
}

/// Moves `disk[c]` one step down the gradient of its share of the energy.
/// Returns how far it moved.
fn relax_node(
    c: usize,
    disk: &mut [PoincarePoint],
    d: &DistanceMatrix,
    alpha: f64,
    eta: f64,
    clamp: f64,
    rng: &mut impl Rng,
) -> f64 {
    let start = disk[c];
    let mut plane = tangent_map(c, disk);
    while plane.iter().enumerate().any(|(j, p)| j != c && p.norm() == 0.0) {
        disk[c] = nudge(c, disk, clamp, rng);
        plane = tangent_map(c, disk);
    }
    // The center sits at the origin, so the gradient of
    // ½ Σ k (|x - x_j| - α d)² there is -Σ k (r_j - α d) x_j / r_j.
    let (mut gx, mut gy, mut k_sum) = (0.0, 0.0, 0.0);
    for (j, p) in plane.iter().enumerate() {
        if j == c {
            continue;
        }
        let dij = d.get(c, j);
        let k = spring(dij);
        let r = p.norm();
        let pull = k * (r - alpha * dij) / r;
        gx += pull * p.x;
        gy += pull * p.y;
        k_sum += k;
    }
    // η k_ij ≤ 1 for every j, and the step never overshoots the weighted
    // average of the pair corrections.
    let step = eta.min(1.0 / k_sum);
    let moved = EuclideanPoint::new(step * gx, step * gy);
    disk[c] = tangent_unmap(c, moved, disk, clamp);
    poincare_distance(start, disk[c])
}

/// Force-directed hyperbolic layout of `g`.
pub fn layout_force(g: &Graph, p: &ForceParams, seed: u64) -> Result<ForceRun, HmdsError> {
    layout_force_with_distances(&apsp(g)?, p, seed)
}

pub fn layout_force_with_distances(d: &DistanceMatrix, p: &ForceParams, seed: u64) -> Result<ForceRun, HmdsError> {
    if !(p.clamp > 0.0 && p.clamp < 1.0) {
        return Err(HmdsError::UnknownOption(format!("clamp radius {} (must lie in (0, 1))", p.clamp)));
    }
    if p.max_iterations == 0 {
        return Err(HmdsError::NoIterations);
    }
    let n = d.len();
    let alpha = p.resolved_alpha(d);
    let init = init_layout(d, InitMode::Random, Geometry::Hyperbolic, alpha, seed)?;
    let mut disk: Vec<PoincarePoint> = if n < 2 {
        vec![PoincarePoint::ORIGIN; n]
    } else {
        init.hyperbolic_points()?.iter().map(|&q| lobachevsky_to_poincare(q).clamped(p.clamp)).collect()
    };

    let schedule = Schedule::new(p.schedule, d.d_max(), d.d_min(), p.max_iterations);
    let mut jitter = ChaCha8Rng::seed_from_u64(seed);
    jitter.set_stream(STREAM_JITTER);
    let mut order: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();
    let mut passes = 0;
    if n >= 2 {
        for t in 0..p.max_iterations {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(STREAM_ORDER | t as u64);
            order.shuffle(&mut rng);
            let eta = schedule.eta_clamped(t);
            let mut moved: f64 = 0.0;
            for &c in &order {
                moved = moved.max(relax_node(c, &mut disk, d, alpha, eta, p.clamp, &mut jitter));
            }
            passes = t + 1;
            let energy = energy_by(n, |i, j| poincare_distance(disk[i], disk[j]), d, alpha);
            trace.push(TraceRow { iteration: passes, stress: energy, max_displacement: moved });
            if moved < p.tolerance {
                break;
            }
        }
    }
    let coords = Coords::Hyperbolic(disk.into_iter().map(poincare_to_lobachevsky).collect());
    Ok(ForceRun { layout: Layout::new(coords, alpha, "force")?, trace, passes })
}
