mod common;

use std::collections::HashSet;
use std::f64::consts::PI;

use common::{lob_point, median, sphere_point};
use hyperlay::geometry::{lobachevsky_distance, sphere_distance, EuclideanPoint, LobachevskyPoint};
use hyperlay::hmds::space::{EuclideanSpace, HyperbolicSpace, Space, SphericalSpace};
use hyperlay::hmds::{
    init_layout, pair_order, run_gd, run_mds, sgd_iteration, sgd_step_pair, InitMode, SgdParams, ShuffleMode,
    WeightRule,
};
use hyperlay::metrics::distortion;
use hyperlay::{apsp, generate, DistanceMatrix, Geometry, GraphKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn step_twice<S: Space>(a: S::Point, b: S::Point, target: f64, w1: f64, w2: f64) -> (Vec<S::Point>, Vec<S::Point>) {
    let mut p = vec![a, b];
    let mut q = vec![a, b];
    sgd_step_pair::<S, _>(&mut p, 0, 1, target, w1, &mut rng(0));
    sgd_step_pair::<S, _>(&mut q, 0, 1, target, w2, &mut rng(0));
    (p, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn step_weight_is_capped(seed in any::<u64>(), target in 0.01..3.0f64) {
        let mut r = rng(seed);
        let (a, b) = (lob_point(&mut r, 3.0), lob_point(&mut r, 3.0));
        let (p, q) = step_twice::<HyperbolicSpace>(a, b, target, 1.0, 10.0);
        prop_assert_eq!(p, q);
        let (a, b) = (sphere_point(&mut r), sphere_point(&mut r));
        let (p, q) = step_twice::<SphericalSpace>(a, b, target, 1.0, 4.0);
        prop_assert_eq!(p, q);
    }

    #[test]
    fn full_step_reaches_the_target(seed in any::<u64>(), target in 0.01..3.0f64) {
        let mut r = rng(seed);
        let (a, b) = (lob_point(&mut r, 3.0), lob_point(&mut r, 3.0));
        let (p, _) = step_twice::<HyperbolicSpace>(a, b, target, 1.0, 1.0);
        prop_assert!((lobachevsky_distance(p[0], p[1]) - target).abs() < 1e-6);

        let (a, b) = (sphere_point(&mut r), sphere_point(&mut r));
        prop_assume!(sphere_distance(a, b) < PI - 1e-3);
        let (p, _) = step_twice::<SphericalSpace>(a, b, target, 1.0, 1.0);
        prop_assert!((sphere_distance(p[0], p[1]) - target).abs() < 1e-6);
    }

    #[test]
    fn exact_pair_does_not_move(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (lob_point(&mut r, 3.0), lob_point(&mut r, 3.0));
        let (p, _) = step_twice::<HyperbolicSpace>(a, b, lobachevsky_distance(a, b), 1.0, 1.0);
        prop_assert!(lobachevsky_distance(p[0], a) < 1e-12 && lobachevsky_distance(p[1], b) < 1e-12);
    }

    #[test]
    fn euclidean_step_matches_vector_update(
        ax in -10.0..10.0f64, ay in -10.0..10.0f64, bx in -10.0..10.0f64, by in -10.0..10.0f64,
        target in 0.1..10.0f64, eta_w in 0.0..2.0f64,
    ) {
        let (a, b) = (EuclideanPoint::new(ax, ay), EuclideanPoint::new(bx, by));
        prop_assume!(a.distance(b) > 1e-6);
        let mut p = vec![a, b];
        sgd_step_pair::<EuclideanSpace, _>(&mut p, 0, 1, target, eta_w, &mut rng(0));
        // Plain vector arithmetic: r = μ (|a-b| - d) / 2 · (a-b)/|a-b|.
        let mu = eta_w.min(1.0);
        let (dx, dy) = (ax - bx, ay - by);
        let len = (dx * dx + dy * dy).sqrt();
        let k = mu * (len - target) / 2.0 / len;
        let oracle = [(ax - k * dx, ay - k * dy), (bx + k * dx, by + k * dy)];
        for (got, want) in p.iter().zip(oracle) {
            prop_assert!((got.x - want.0).abs() < 1e-12 && (got.y - want.1).abs() < 1e-12);
        }
    }

    #[test]
    fn reshuffle_visits_every_pair_once(n in 2usize..40, seed in any::<u64>(), t in 0usize..50) {
        let pairs = pair_order(n, ShuffleMode::Reshuffle, seed, t);
        prop_assert_eq!(pairs.len(), n * (n - 1) / 2);
        let set: HashSet<_> = pairs.iter().copied().collect();
        prop_assert_eq!(set.len(), pairs.len());
        prop_assert!(pairs.iter().all(|&(i, j)| i < j && j < n));
        prop_assert_eq!(pairs.clone(), pair_order(n, ShuffleMode::Reshuffle, seed, t));
    }

    #[test]
    fn other_orders_have_full_length(n in 2usize..40, seed in any::<u64>(), t in 0usize..50) {
        for mode in [ShuffleMode::Replacement, ShuffleMode::IndexShuffle] {
            let pairs = pair_order(n, mode, seed, t);
            prop_assert_eq!(pairs.len(), n * (n - 1) / 2);
            prop_assert!(pairs.iter().all(|&(i, j)| i != j && i < n && j < n));
        }
    }

    // Rotating a cycle is an automorphism; a sweep over the rotated pairs
    // from the rotated start lands on the rotated result.
    #[test]
    fn sweep_commutes_with_automorphisms(n in 3usize..20, shift in 1usize..20, seed in any::<u64>()) {
        let d = apsp(&generate(&GraphKind::Cycle(n)).unwrap()).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let mut r = rng(seed);
        let start: Vec<LobachevskyPoint> = (0..n).map(|_| lob_point(&mut r, 1.0)).collect();
        let pairs = pair_order(n, ShuffleMode::Reshuffle, seed, 0);

        let mut x = start.clone();
        sgd_iteration::<HyperbolicSpace, _>(&mut x, &d, 0.7, 2.0, WeightRule::InverseSquare, &pairs, &mut rng(1));

        let mut y = vec![LobachevskyPoint::ORIGIN; n];
        for i in 0..n {
            y[perm[i]] = start[i];
        }
        let moved: Vec<_> = pairs.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        sgd_iteration::<HyperbolicSpace, _>(&mut y, &d, 0.7, 2.0, WeightRule::InverseSquare, &moved, &mut rng(1));
        for i in 0..n {
            prop_assert!(lobachevsky_distance(y[perm[i]], x[i]) < 1e-12);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let g = generate(&GraphKind::RandomTree { n: 40, seed: 5 }).unwrap();
    for geometry in Geometry::ALL {
        let a = run_mds(&g, geometry, &SgdParams::with_seed(9)).unwrap();
        let b = run_mds(&g, geometry, &SgdParams::with_seed(9)).unwrap();
        assert_eq!(a.layout, b.layout);
        assert_eq!(a.trace, b.trace);
    }
}

#[test]
fn single_edge_reaches_its_length() {
    let g = generate(&GraphKind::Path(2)).unwrap();
    for geometry in Geometry::ALL {
        for seed in 0..5 {
            let run = run_mds(&g, geometry, &SgdParams::with_seed(seed)).unwrap();
            assert!((run.layout.distance(0, 1) - run.alpha).abs() < 1e-4, "{geometry} seed {seed}");
            let gd = run_gd(&g, geometry, &SgdParams::with_seed(seed)).unwrap();
            assert!((gd.layout.distance(0, 1) - gd.alpha).abs() < 1e-4, "{geometry} seed {seed}");
        }
    }
}

#[test]
fn trees_prefer_hyperbolic_and_cycles_euclidean() {
    let tree = generate(&GraphKind::BinaryTree { depth: 5 }).unwrap();
    let ring = generate(&GraphKind::Cycle(50)).unwrap();
    let dt = apsp(&tree).unwrap();
    let dr = apsp(&ring).unwrap();
    for seed in 0..5 {
        let p = SgdParams::with_seed(seed);
        let h = distortion(&run_mds(&tree, Geometry::Hyperbolic, &p).unwrap().layout, &dt).unwrap();
        let e = distortion(&run_mds(&tree, Geometry::Euclidean, &p).unwrap().layout, &dt).unwrap();
        assert!(h < e, "tree seed {seed}: hyperbolic {h} euclidean {e}");
        let h = distortion(&run_mds(&ring, Geometry::Hyperbolic, &p).unwrap().layout, &dr).unwrap();
        let e = distortion(&run_mds(&ring, Geometry::Euclidean, &p).unwrap().layout, &dr).unwrap();
        assert!(e < h, "cycle seed {seed}: hyperbolic {h} euclidean {e}");
    }
}

#[test]
fn stress_trace_settles_after_the_first_iterations() {
    for kind in [GraphKind::Grid { width: 10, height: 10 }, GraphKind::RandomTree { n: 50, seed: 3 }] {
        let g = generate(&kind).unwrap();
        let traces: Vec<Vec<f64>> = (0..15)
            .map(|s| run_mds(&g, Geometry::Hyperbolic, &SgdParams::with_seed(s)).unwrap().trace.iter().map(|r| r.stress).collect())
            .collect();
        let med: Vec<f64> = (0..traces[0].len()).map(|t| median(traces.iter().map(|tr| tr[t]).collect())).collect();
        for t in 3..med.len() {
            assert!(med[t] <= med[t - 1] * 1.01, "{kind:?} iteration {}: {} after {}", t + 1, med[t], med[t - 1]);
        }
    }
}

fn flat_distances(n: usize) -> DistanceMatrix {
    let d = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
    DistanceMatrix::from_rows(n, d).unwrap()
}

#[test]
fn random_init_stays_within_unit_radius() {
    let d = flat_distances(100);
    let origin = LobachevskyPoint::ORIGIN;
    let l = init_layout(&d, InitMode::Random, Geometry::Hyperbolic, 1.0, 4).unwrap();
    assert!(l.hyperbolic_points().unwrap().iter().all(|&p| lobachevsky_distance(origin, p) <= 1.0 + 1e-12));
    assert_eq!(l, init_layout(&d, InitMode::Random, Geometry::Hyperbolic, 1.0, 4).unwrap());
    let s = init_layout(&d, InitMode::Random, Geometry::Spherical, 1.0, 4).unwrap();
    let north = hyperlay::geometry::SpherePoint::north();
    assert!(s.spherical_points().unwrap().iter().all(|&p| sphere_distance(north, p) <= 1.0 + 1e-12));
    let e = init_layout(&d, InitMode::Random, Geometry::Euclidean, 1.0, 4).unwrap();
    assert!(e.euclidean_points().unwrap().iter().all(|p| p.norm() <= 1.0 + 1e-12));
    assert!(init_layout(&d, InitMode::Smart, Geometry::Spherical, 1.0, 4).is_err());
}

/// Simpson's rule on [0, 1].
fn simpson(f: impl Fn(f64) -> f64) -> f64 {
    let m = 2000;
    let h = 1.0 / m as f64;
    let mut s = f(0.0) + f(1.0);
    for k in 1..m {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn random_init_is_area_uniform() {
    let expected = simpson(|r| r * r.sinh()) / simpson(f64::sinh);
    let d = flat_distances(1000);
    let mut total = 0.0;
    let mut count = 0;
    for seed in 0..100 {
        let l = init_layout(&d, InitMode::Random, Geometry::Hyperbolic, 1.0, seed).unwrap();
        for &p in l.hyperbolic_points().unwrap() {
            total += lobachevsky_distance(LobachevskyPoint::ORIGIN, p);
            count += 1;
        }
    }
    let mean = total / count as f64;
    // Standard deviation of the radius is about 0.23, so the standard error
    // over 1e5 samples is below 1e-3.
    assert!((mean - expected).abs() < 3e-3, "mean {mean} expected {expected}");
    assert!((expected - 0.677394).abs() < 1e-6);
}
