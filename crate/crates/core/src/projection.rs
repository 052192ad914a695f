//! Lifting a precomputed Euclidean drawing into the hyperbolic plane.
//!
//! The pipeline is: center the drawing on its centroid, scale it so the
//! farthest node lands at a chosen hyperbolic radius, apply the
//! area-preserving inverse Lambert azimuthal map `(r, θ) ↦ (f(r), θ)`, and
//! finally read positions off in the Poincaré disk.

use crate::geometry::{
    lambert_inverse_radius, lambert_radius, EuclideanPoint, HyperbolicPolar, LobachevskyPoint, PoincarePoint,
};
use crate::graph::Graph;
use crate::layout::{Coords, Layout, LayoutError, Region};
use num_complex::Complex64;

/// Hyperbolic radius of the farthest node at 100% coverage.
pub const DEFAULT_RHO_BASE: f64 = 6.0;

/// Disk radius beyond which display coordinates are pulled back.
pub const DEFAULT_CLAMP: f64 = 0.999;

/// Euclidean layout taken from the positions stored in `g`, with its
/// polygons attached.
pub fn layout_from_positions(g: &Graph) -> Result<Layout, LayoutError> {
    let points = g.positions().ok_or(LayoutError::MissingPositions)?;
    let regions = g
        .polygons()
        .iter()
        .map(|p| Region {
            cluster: p.cluster,
            color: p.color.clone(),
            vertices: Coords::Euclidean(p.vertices.clone()),
        })
        .collect();
    Layout::euclidean(points, "euclidean-input").with_polygons(regions)
}

fn map_euclidean(l: &Layout, f: impl Fn(EuclideanPoint) -> EuclideanPoint) -> Result<Layout, LayoutError> {
    let points = l.euclidean_points()?.iter().copied().map(&f).collect();
    let regions = l
        .polygons()
        .iter()
        .map(|r| {
            let Coords::Euclidean(v) = &r.vertices else { unreachable!("checked on construction") };
            Region {
                cluster: r.cluster,
                color: r.color.clone(),
                vertices: Coords::Euclidean(v.iter().copied().map(&f).collect()),
            }
        })
        .collect();
    Layout::new(Coords::Euclidean(points), l.alpha(), l.method())?.with_polygons(regions)
}

/// Translates the layout so the centroid of its nodes is the origin.
pub fn center_layout(l: &Layout) -> Result<Layout, LayoutError> {
    let points = l.euclidean_points()?;
    if points.is_empty() {
        return Ok(l.clone());
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.y).sum::<f64>() / n;
    map_euclidean(l, |p| EuclideanPoint::new(p.x - cx, p.y - cy))
}

/// Scales a centered layout so that, after projection, its farthest node sits
/// at hyperbolic radius `coverage * rho_base`.
pub fn coverage_scale(l: &Layout, coverage: f64, rho_base: f64) -> Result<Layout, LayoutError> {
    if !(0.5..=1.5).contains(&coverage) {
        return Err(LayoutError::Coverage(coverage));
    }
    let far = l.euclidean_points()?.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if far == 0.0 {
        return Ok(l.clone());
    }
    let k = lambert_radius(coverage * rho_base) / far;
    map_euclidean(l, |p| EuclideanPoint::new(p.x * k, p.y * k))
}

fn lift(p: EuclideanPoint) -> LobachevskyPoint {
    let rho = lambert_inverse_radius(p.norm()).expect("norms are non-negative");
    LobachevskyPoint::from_polar(HyperbolicPolar::new(rho, p.angle()))
}

/// Inverse hyperbolic Lambert azimuthal projection about the origin.
pub fn project_to_hyperbolic(l: &Layout) -> Result<Layout, LayoutError> {
    let points = l.euclidean_points()?.iter().copied().map(lift).collect();
    let regions = l
        .polygons()
        .iter()
        .map(|r| {
            let Coords::Euclidean(v) = &r.vertices else { unreachable!("checked on construction") };
            Region {
                cluster: r.cluster,
                color: r.color.clone(),
                vertices: Coords::Hyperbolic(v.iter().copied().map(lift).collect()),
            }
        })
        .collect();
    Layout::new(Coords::Hyperbolic(points), l.alpha(), "project")?.with_polygons(regions)
}

/// Center, scale and project in one go.
pub fn project_pipeline(l: &Layout, coverage: f64, rho_base: f64) -> Result<Layout, LayoutError> {
    let centered = center_layout(l)?;
    let scaled = coverage_scale(&centered, coverage, rho_base)?;
    project_to_hyperbolic(&scaled)
}

/// Disk position of a hyperbolic point, pulled back to radius `clamp`.
pub fn display_point(p: LobachevskyPoint, clamp: f64) -> PoincarePoint {
    let hp = p.to_polar();
    let r = (0.5 * hp.rho).tanh().min(clamp);
    PoincarePoint::new(Complex64::from_polar(r, hp.theta))
        .unwrap_or(PoincarePoint::ORIGIN)
        .clamped(clamp)
}

/// Poincaré-disk display coordinates for every node.
pub fn to_display(l: &Layout, clamp: f64) -> Result<Vec<PoincarePoint>, LayoutError> {
    Ok(l.hyperbolic_points()?.iter().map(|&p| display_point(p, clamp)).collect())
}
