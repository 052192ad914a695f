mod common;

use common::disk_point;
use hyperlay::force::{kk_energy, layout_force, tangent_map, tangent_unmap, ForceParams};
use hyperlay::geometry::{lobachevsky_to_poincare, poincare_distance, EuclideanPoint, PoincarePoint};
use hyperlay::hmds::{init_layout, InitMode};
use hyperlay::{apsp, generate, Geometry, GraphKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cloud(seed: u64, n: usize) -> Vec<PoincarePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| disk_point(&mut rng, 0.95)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn tangent_map_keeps_distances_from_the_center(seed in any::<u64>(), n in 2usize..20, c in 0usize..20) {
        let disk = cloud(seed, n);
        let c = c % n;
        let plane = tangent_map(c, &disk);
        prop_assert_eq!(plane[c], EuclideanPoint::ORIGIN);
        for (j, p) in plane.iter().enumerate() {
            prop_assert!((p.norm() - poincare_distance(disk[c], disk[j])).abs() < 1e-9);
        }
    }

    #[test]
    fn unmap_inverts_map(seed in any::<u64>(), n in 2usize..20, c in 0usize..20) {
        let disk = cloud(seed, n);
        let c = c % n;
        let plane = tangent_map(c, &disk);
        for (j, &p) in plane.iter().enumerate() {
            let back = tangent_unmap(c, p, &disk, 0.999);
            prop_assert!((back.z() - disk[j].z()).norm() < 1e-9, "node {j}");
        }
    }

    #[test]
    fn unmap_respects_the_clamp(seed in any::<u64>(), r in 0.0..200.0f64, theta in -3.2..3.2f64, clamp in 0.5..0.9999f64) {
        let disk = cloud(seed, 3);
        let moved = EuclideanPoint::from_polar(r, theta);
        prop_assert!(tangent_unmap(0, moved, &disk, clamp).norm() <= clamp);
    }
}

#[test]
fn far_moves_are_clamped() {
    let disk = vec![PoincarePoint::ORIGIN, PoincarePoint::from_xy(0.3, 0.1).unwrap()];
    let out = tangent_unmap(0, EuclideanPoint::new(100.0, 0.0), &disk, 0.999);
    assert!(out.norm() <= 0.999 && out.norm() > 0.998);
}

#[test]
fn energy_never_ends_above_its_start() {
    let kinds = [
        GraphKind::Path(12),
        GraphKind::Cycle(15),
        GraphKind::Grid { width: 5, height: 5 },
        GraphKind::BinaryTree { depth: 4 },
        GraphKind::RandomTree { n: 30, seed: 2 },
        GraphKind::Random { n: 30, m: 90, seed: 4 },
    ];
    for kind in kinds {
        let g = generate(&kind).unwrap();
        let d = apsp(&g).unwrap();
        let p = ForceParams::default();
        for seed in 0..5 {
            let alpha = p.resolved_alpha(&d);
            let start = init_layout(&d, InitMode::Random, Geometry::Hyperbolic, alpha, seed).unwrap();
            let run = layout_force(&g, &p, seed).unwrap();
            let (e0, e1) = (kk_energy(&start, &d).unwrap(), kk_energy(&run.layout, &d).unwrap());
            assert!(e1 <= e0, "{kind:?} seed {seed}: {e0} -> {e1}");
            for &q in run.layout.hyperbolic_points().unwrap() {
                assert!(lobachevsky_to_poincare(q).norm() <= 0.999 + 1e-12);
            }
            assert_eq!(run.trace.len(), run.passes);
        }
    }
}

#[test]
fn path_of_three_settles() {
    let g = generate(&GraphKind::Path(3)).unwrap();
    let p = ForceParams { alpha: Some(1.0), ..ForceParams::default() };
    for seed in 0..5 {
        let l = layout_force(&g, &p, seed).unwrap().layout;
        for (i, j, want) in [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)] {
            assert!((l.distance(i, j) - want).abs() < 0.05, "seed {seed} pair ({i},{j})");
        }
        assert_eq!(l, layout_force(&g, &p, seed).unwrap().layout);
    }
}
