use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::space::{EuclideanSpace, HyperbolicSpace, Space, SphericalSpace};
use super::{resolve_alpha, HmdsError, InitMode, MdsRun, Schedule, ShuffleMode, SgdParams, StopRule, TraceRow, WeightRule};
use crate::geometry::EuclideanPoint;
use crate::graph::{apsp, DistanceMatrix, Graph};
use crate::layout::{Coords, Geometry, Layout};
use crate::metrics::stress_by;
use crate::projection::{center_layout, project_to_hyperbolic};

/// Default displacement tolerance for [`StopRule::Convergence`].
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// Euclidean iterations run before projecting, for [`InitMode::Smart`].
pub const SMART_INIT_ITERATIONS: usize = 5;

// Each consumer of randomness gets its own ChaCha stream so that, for
// example, changing the shuffle mode does not change the initial layout.
const STREAM_INIT: u64 = 1 << 32;
const STREAM_ORDER: u64 = 2 << 32;
const STREAM_JITTER: u64 = 3 << 32;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The pairs visited in iteration `t`.
pub fn pair_order(n: usize, mode: ShuffleMode, seed: u64, t: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let mut rng = rng_for(seed, STREAM_ORDER | t as u64);
    let total = n * (n - 1) / 2;
    let mut pairs = Vec::with_capacity(total);
    match mode {
        ShuffleMode::Reshuffle => {
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((i, j));
                }
            }
            pairs.shuffle(&mut rng);
        }
        ShuffleMode::Replacement => {
            for _ in 0..total {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                pairs.push((i.min(j), i.max(j)));
            }
        }
        ShuffleMode::IndexShuffle => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((perm[i], perm[j]));
                }
            }
        }
    }
    pairs
}

/// Moves `i` and `j` along their connecting geodesic so that their distance
/// approaches `target`, each by `μ (δ - target) / 2` with `μ = min(1, η w)`.
///
/// Coincident (or, on the sphere, antipodal) pairs are first nudged apart.
/// Returns the distance each endpoint moved.
pub fn sgd_step_pair<S: Space, R: Rng + ?Sized>(
    points: &mut [S::Point],
    i: usize,
    j: usize,
    target: f64,
    eta_w: f64,
    rng: &mut R,
) -> f64 {
    let mu = eta_w.min(1.0);
    let mut a = points[i];
    let b = points[j];
    let (ta, tb) = loop {
        match (S::toward(a, b), S::toward(b, a)) {
            (Some(ta), Some(tb)) => break (ta, tb),
            _ => a = S::jitter(a, rng),
        }
    };
    let r = mu * (S::distance(a, b) - target) / 2.0;
    points[i] = S::exp(a, ta, r);
    points[j] = S::exp(b, tb, r);
    r.abs()
}

fn max_displacement<S: Space>(before: &[S::Point], after: &[S::Point]) -> f64 {
    before.iter().zip(after).map(|(&a, &b)| S::distance(a, b)).fold(0.0, f64::max)
}

/// One SGD sweep over `pairs`. Returns the largest distance any node moved.
pub fn sgd_iteration<S: Space, R: Rng + ?Sized>(
    points: &mut [S::Point],
    d: &DistanceMatrix,
    alpha: f64,
    eta: f64,
    weight: WeightRule,
    pairs: &[(usize, usize)],
    rng: &mut R,
) -> f64 {
    let before = points.to_vec();
    for &(i, j) in pairs {
        let dij = d.get(i, j);
        sgd_step_pair::<S, R>(points, i, j, alpha * dij, eta * weight.weight(dij), rng);
    }
    max_displacement::<S>(&before, points)
}

/// One full-gradient step: every node moves by the average of the pair
/// corrections SGD would apply to it, all evaluated at the old positions.
pub fn gd_iteration<S: Space, R: Rng + ?Sized>(
    points: &mut [S::Point],
    d: &DistanceMatrix,
    alpha: f64,
    eta: f64,
    weight: WeightRule,
    rng: &mut R,
) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let before = points.to_vec();
    let share = 1.0 / (n - 1) as f64;
    for i in 0..n {
        let a = before[i];
        let mut step = S::Tangent::default();
        let mut degenerate = false;
        for (j, &b) in before.iter().enumerate() {
            if j == i {
                continue;
            }
            let Some(dir) = S::toward(a, b) else {
                degenerate = true;
                continue;
            };
            let dij = d.get(i, j);
            let mu = (eta * weight.weight(dij)).min(1.0);
            step = step + dir * (mu * (S::distance(a, b) - alpha * dij) / 2.0);
        }
        let moved = S::exp(a, step, share);
        points[i] = if degenerate { S::jitter(moved, rng) } else { moved };
    }
    max_displacement::<S>(&before, points)
}

/// Starting coordinates for a run.
///
/// Random mode samples area-uniformly from the unit-radius disk about the
/// base point. Smart mode (hyperbolic only) runs a few Euclidean SGD
/// iterations, centers the result, scales it by `alpha` and lifts it with the
/// inverse Lambert projection.
pub fn init_layout(
    d: &DistanceMatrix,
    mode: InitMode,
    geometry: Geometry,
    alpha: f64,
    seed: u64,
) -> Result<Layout, HmdsError> {
    let n = d.len();
    let coords = match (mode, geometry) {
        (InitMode::Random, Geometry::Hyperbolic) => random_points::<HyperbolicSpace>(n, seed),
        (InitMode::Random, Geometry::Spherical) => random_points::<SphericalSpace>(n, seed),
        (InitMode::Random, Geometry::Euclidean) => random_points::<EuclideanSpace>(n, seed),
        (InitMode::Smart, Geometry::Hyperbolic) => return smart_init(d, alpha, seed),
        (InitMode::Smart, other) => return Err(HmdsError::SmartInit(other)),
    };
    Ok(Layout::new(coords, alpha, "init")?)
}

fn random_points<S: Space>(n: usize, seed: u64) -> Coords {
    let mut rng = rng_for(seed, STREAM_INIT);
    S::wrap((0..n).map(|_| S::sample_unit_disk(&mut rng)).collect())
}

fn smart_init(d: &DistanceMatrix, alpha: f64, seed: u64) -> Result<Layout, HmdsError> {
    let params = SgdParams {
        iterations: SMART_INIT_ITERATIONS,
        stop: StopRule::FixedIterations,
        record_trace: false,
        seed,
        ..SgdParams::default()
    };
    let Coords::Euclidean(start) = random_points::<EuclideanSpace>(d.len(), seed) else { unreachable!() };
    let (points, _, _) = optimize::<EuclideanSpace>(start, d, 1.0, &params, false);
    let centered = center_layout(&Layout::euclidean(points, "smart-init"))?;
    let scaled: Vec<EuclideanPoint> = centered
        .euclidean_points()?
        .iter()
        .map(|p| EuclideanPoint::new(p.x * alpha, p.y * alpha))
        .collect();
    let lifted = project_to_hyperbolic(&Layout::euclidean(scaled, "smart-init"))?;
    Ok(Layout::new(lifted.coords().clone(), alpha, "init")?)
}

fn optimize<S: Space>(
    mut points: Vec<S::Point>,
    d: &DistanceMatrix,
    alpha: f64,
    params: &SgdParams,
    full_gradient: bool,
) -> (Vec<S::Point>, Vec<TraceRow>, usize) {
    let n = points.len();
    if n < 2 {
        return (points, Vec::new(), 0);
    }
    let schedule = Schedule::new(params.schedule, d.d_max(), d.d_min(), params.iterations);
    let (limit, tolerance) = match params.stop {
        StopRule::FixedIterations => (params.iterations, None),
        StopRule::Convergence { tolerance, max_iterations } => (max_iterations, Some(tolerance)),
    };
    let mut rng = rng_for(params.seed, STREAM_JITTER);
    let mut trace = Vec::new();
    let mut done = 0;
    for t in 0..limit {
        let eta = schedule.eta_clamped(t);
        let moved = if full_gradient {
            gd_iteration::<S, _>(&mut points, d, alpha, eta, params.weight, &mut rng)
        } else {
            let pairs = pair_order(n, params.shuffle, params.seed, t);
            sgd_iteration::<S, _>(&mut points, d, alpha, eta, params.weight, &pairs, &mut rng)
        };
        done = t + 1;
        if params.record_trace {
            let stress = stress_by(n, |i, j| S::distance(points[i], points[j]), d, params.weight, alpha);
            trace.push(TraceRow { iteration: done, stress, max_displacement: moved });
        }
        if tolerance.is_some_and(|tol| moved < tol) {
            break;
        }
    }
    (points, trace, done)
}

fn run_in<S: Space>(
    init: &Layout,
    d: &DistanceMatrix,
    alpha: f64,
    params: &SgdParams,
    full_gradient: bool,
) -> (Coords, Vec<TraceRow>, usize) {
    let start = S::unwrap(init.coords()).expect("init matches the geometry").to_vec();
    let (points, trace, done) = optimize::<S>(start, d, alpha, params, full_gradient);
    (S::wrap(points), trace, done)
}

fn run(d: &DistanceMatrix, geometry: Geometry, params: &SgdParams, full_gradient: bool) -> Result<MdsRun, HmdsError> {
    if params.iterations == 0 {
        return Err(HmdsError::NoIterations);
    }
    let start = Instant::now();
    let alpha = resolve_alpha(d, geometry, params)?;
    let init = init_layout(d, params.init, geometry, alpha, params.seed)?;
    let (coords, trace, iterations) = match geometry {
        Geometry::Hyperbolic => run_in::<HyperbolicSpace>(&init, d, alpha, params, full_gradient),
        Geometry::Spherical => run_in::<SphericalSpace>(&init, d, alpha, params, full_gradient),
        Geometry::Euclidean => run_in::<EuclideanSpace>(&init, d, alpha, params, full_gradient),
    };
    let method = if full_gradient { "gd" } else { "hmds" };
    Ok(MdsRun { layout: Layout::new(coords, alpha, method)?, trace, iterations, alpha, wall_time: start.elapsed() })
}

/// Stress-minimizing layout of `g` by SGD.
pub fn run_mds(g: &Graph, geometry: Geometry, params: &SgdParams) -> Result<MdsRun, HmdsError> {
    run_mds_with_distances(&apsp(g)?, geometry, params)
}

pub fn run_mds_with_distances(d: &DistanceMatrix, geometry: Geometry, params: &SgdParams) -> Result<MdsRun, HmdsError> {
    run(d, geometry, params, false)
}

/// Full-gradient baseline with the same schedule, initialization and scale
/// factor as [`run_mds`]. The shuffle mode is ignored.
pub fn run_gd(g: &Graph, geometry: Geometry, params: &SgdParams) -> Result<MdsRun, HmdsError> {
    run_gd_with_distances(&apsp(g)?, geometry, params)
}

pub fn run_gd_with_distances(d: &DistanceMatrix, geometry: Geometry, params: &SgdParams) -> Result<MdsRun, HmdsError> {
    run(d, geometry, params, true)
}
