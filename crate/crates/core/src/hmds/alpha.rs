use std::f64::consts::PI;

use super::{run_mds_with_distances, AlphaMode, HmdsError, SgdParams, StopRule};
use crate::graph::DistanceMatrix;
use crate::layout::Geometry;
use crate::metrics::distortion;

/// Largest hyperbolic distance the default scale factor allows.
const HYPERBOLIC_SPAN: f64 = 10.0;

/// Budget for the golden-section search over the scale factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaSearch {
    pub probes: usize,
    pub inner_iterations: usize,
}

impl Default for AlphaSearch {
    fn default() -> Self {
        Self { probes: 20, inner_iterations: 10 }
    }
}

/// The scale factor a run with `params` will use.
pub fn resolve_alpha(d: &DistanceMatrix, geometry: Geometry, params: &SgdParams) -> Result<f64, HmdsError> {
    match params.alpha {
        AlphaMode::Fixed(a) => Ok(a),
        AlphaMode::Heuristic => Ok(heuristic(d.d_max(), geometry)),
        AlphaMode::Search => Ok(search_alpha(d, geometry, params, AlphaSearch::default())?.0),
    }
}

fn heuristic(d_max: f64, geometry: Geometry) -> f64 {
    if d_max <= 0.0 {
        return 1.0;
    }
    match geometry {
        Geometry::Hyperbolic => HYPERBOLIC_SPAN / d_max,
        Geometry::Spherical => PI / d_max,
        Geometry::Euclidean => 1.0,
    }
}

/// Golden-section search for the scale factor with the lowest distortion.
///
/// Each probe is a short run with the seed from `params`. The two ends of
/// the bracket are probed first, since the optimum often sits on the upper
/// cap; the remaining probes go to the golden-section search. Returns the
/// best probe together with every `(alpha, distortion)` pair evaluated, in
/// order.
pub fn search_alpha(
    d: &DistanceMatrix,
    geometry: Geometry,
    params: &SgdParams,
    search: AlphaSearch,
) -> Result<(f64, Vec<(f64, f64)>), HmdsError> {
    let d_max = d.d_max();
    if d_max <= 0.0 {
        return Ok((1.0, Vec::new()));
    }
    let (lo, hi) = match geometry {
        Geometry::Hyperbolic => (0.1 / d_max, 20.0 / d_max),
        Geometry::Spherical => (0.1 / d_max, PI / d_max),
        Geometry::Euclidean => return Err(HmdsError::EuclideanSearch),
    };
    let inner = SgdParams {
        iterations: search.inner_iterations.max(1),
        stop: StopRule::FixedIterations,
        record_trace: false,
        ..params.clone()
    };
    let mut probes = Vec::with_capacity(search.probes);
    let mut eval = |alpha: f64| -> Result<f64, HmdsError> {
        let run = run_mds_with_distances(d, geometry, &SgdParams { alpha: AlphaMode::Fixed(alpha), ..inner.clone() })?;
        let value = distortion(&run.layout, d)?;
        probes.push((alpha, value));
        Ok(value)
    };

    let interior = if search.probes >= 4 {
        eval(lo)?;
        eval(hi)?;
        search.probes - 2
    } else {
        search.probes
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut e = a + ratio * (b - a);
    let mut fc = eval(c)?;
    let mut fe = eval(e)?;
    for _ in 2..interior.max(2) {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - ratio * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + ratio * (b - a);
            fe = eval(e)?;
        }
    }
    let best = probes.iter().copied().fold((f64::NAN, f64::INFINITY), |best, p| if p.1 < best.1 { p } else { best });
    Ok((best.0, probes))
}
