//! Embedding quality: stress, distortion, and the cross-geometry comparison.

use std::fmt;

use rayon::prelude::*;

use crate::graph::{apsp, DistanceMatrix, Graph, GraphError};
use crate::hmds::{run_mds_with_distances, AlphaMode, HmdsError, MdsRun, SgdParams, WeightRule};
use crate::layout::{Geometry, Layout, LayoutError};

/// `Σ_{i<j} w_ij (dist(i, j) - α d_ij)²` for an arbitrary distance function.
pub fn stress_by(
    n: usize,
    dist: impl Fn(usize, usize) -> f64,
    d: &DistanceMatrix,
    weight: WeightRule,
    alpha: f64,
) -> f64 {
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dij = d.get(i, j);
            let r = dist(i, j) - alpha * dij;
            total += weight.weight(dij) * r * r;
        }
    }
    total
}

/// Mean of `|dist(i, j) / α - d_ij| / d_ij` over all pairs.
pub fn distortion_by(n: usize, dist: impl Fn(usize, usize) -> f64, d: &DistanceMatrix, alpha: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dij = d.get(i, j);
            total += (dist(i, j) / alpha - dij).abs() / dij;
        }
    }
    total / (n * (n - 1) / 2) as f64
}

fn check_size(l: &Layout, d: &DistanceMatrix) -> Result<(), LayoutError> {
    if l.len() != d.len() {
        return Err(LayoutError::SizeMismatch { layout: l.len(), graph: d.len() });
    }
    Ok(())
}

/// Weighted stress of `l` against the targets `α d_ij`.
pub fn stress(l: &Layout, d: &DistanceMatrix, weight: WeightRule, alpha: f64) -> Result<f64, LayoutError> {
    check_size(l, d)?;
    Ok(stress_by(l.len(), |i, j| l.distance(i, j), d, weight, alpha))
}

/// Average relative distance error, with realized distances divided by the
/// layout's scale factor so the result is in graph units.
pub fn distortion(l: &Layout, d: &DistanceMatrix) -> Result<f64, LayoutError> {
    check_size(l, d)?;
    Ok(distortion_by(l.len(), |i, j| l.distance(i, j), d, l.alpha()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub stress: f64,
    pub distortion: f64,
    pub geometry: Geometry,
    pub alpha: f64,
    pub wall_time_seconds: f64,
    pub iterations_run: usize,
    pub seed: u64,
}

impl QualityReport {
    pub fn from_run(run: &MdsRun, d: &DistanceMatrix, weight: WeightRule, seed: u64) -> Result<Self, LayoutError> {
        Ok(Self {
            stress: stress(&run.layout, d, weight, run.alpha)?,
            distortion: distortion(&run.layout, d)?,
            geometry: run.layout.geometry(),
            alpha: run.alpha,
            wall_time_seconds: run.wall_time.as_secs_f64(),
            iterations_run: run.iterations,
            seed,
        })
    }
}

impl fmt::Display for QualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "geometry={} alpha={:.6} stress={:.6} distortion={:.6} iterations={} seed={} time={:.3}s",
            self.geometry, self.alpha, self.stress, self.distortion, self.iterations_run, self.seed, self.wall_time_seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySummary {
    pub geometry: Geometry,
    pub mean_distortion: f64,
    pub mean_stress: f64,
    pub mean_alpha: f64,
    pub reports: Vec<QualityReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// One row per geometry, in [`Geometry::ALL`] order.
    pub rows: Vec<GeometrySummary>,
    /// Geometry with the lowest mean distortion.
    pub best: Geometry,
}

impl Comparison {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("geometry\tmean_distortion\tmean_stress\tmean_alpha\truns\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                r.geometry,
                r.mean_distortion,
                r.mean_stress,
                r.mean_alpha,
                r.reports.len()
            ));
        }
        out
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>12} {:>12} {:>10}", "geometry", "distortion", "stress", "alpha")?;
        for r in &self.rows {
            let mark = if r.geometry == self.best { " *" } else { "" };
            writeln!(
                f,
                "{:<12} {:>12.4} {:>12.4} {:>10.4}{mark}",
                r.geometry.name(),
                r.mean_distortion,
                r.mean_stress,
                r.mean_alpha
            )?;
        }
        Ok(())
    }
}

/// Runs SGD in all three geometries with the heuristic scale factor, once
/// per seed, and averages the results.
pub fn compare_geometries(g: &Graph, params: &SgdParams, seeds: &[u64]) -> Result<Comparison, HmdsError> {
    let d = apsp(g).map_err(HmdsError::Graph)?;
    compare_geometries_with_distances(&d, params, seeds)
}

pub fn compare_geometries_with_distances(
    d: &DistanceMatrix,
    params: &SgdParams,
    seeds: &[u64],
) -> Result<Comparison, HmdsError> {
    if seeds.is_empty() {
        return Err(HmdsError::Graph(GraphError::Parameters("at least one seed is required".into())));
    }
    let jobs: Vec<(Geometry, u64)> =
        Geometry::ALL.iter().flat_map(|&g| seeds.iter().map(move |&s| (g, s))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(geometry, seed)| {
            let p = SgdParams { alpha: AlphaMode::Heuristic, seed, ..params.clone() };
            let run = run_mds_with_distances(d, geometry, &p)?;
            Ok(QualityReport::from_run(&run, d, p.weight, seed)?)
        })
        .collect::<Result<Vec<_>, HmdsError>>()?;

    let rows: Vec<GeometrySummary> = reports
        .chunks(seeds.len())
        .map(|chunk| {
            let k = chunk.len() as f64;
            GeometrySummary {
                geometry: chunk[0].geometry,
                mean_distortion: chunk.iter().map(|r| r.distortion).sum::<f64>() / k,
                mean_stress: chunk.iter().map(|r| r.stress).sum::<f64>() / k,
                mean_alpha: chunk.iter().map(|r| r.alpha).sum::<f64>() / k,
                reports: chunk.to_vec(),
            }
        })
        .collect();
    let best = rows
        .iter()
        .min_by(|a, b| a.mean_distortion.total_cmp(&b.mean_distortion))
        .map(|r| r.geometry)
        .expect("three geometries");
    Ok(Comparison { rows, best })
}
