//! Per-node coordinates tagged with their geometry.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{lobachevsky_distance, sphere_distance, EuclideanPoint, LobachevskyPoint, SpherePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::Spherical, Geometry::Euclidean, Geometry::Hyperbolic];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Hyperbolic => "hyperbolic",
            Geometry::Spherical => "spherical",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(Geometry::Euclidean),
            "hyperbolic" => Ok(Geometry::Hyperbolic),
            "spherical" => Ok(Geometry::Spherical),
            other => Err(LayoutError::UnknownGeometry(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("unknown geometry `{0}`")]
    UnknownGeometry(String),
    #[error("scale factor must be positive and finite, got {0}")]
    BadAlpha(f64),
    #[error("expected a {expected} layout, got {found}")]
    WrongGeometry { expected: Geometry, found: Geometry },
    #[error("layout has {layout} nodes but the graph has {graph}")]
    SizeMismatch { layout: usize, graph: usize },
    #[error("coverage {0} is outside [0.5, 1.5]")]
    Coverage(f64),
    #[error("the input graph carries no node positions")]
    MissingPositions,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Euclidean(Vec<EuclideanPoint>),
    Hyperbolic(Vec<LobachevskyPoint>),
    Spherical(Vec<SpherePoint>),
}

impl Coords {
    pub fn geometry(&self) -> Geometry {
        match self {
            Coords::Euclidean(_) => Geometry::Euclidean,
            Coords::Hyperbolic(_) => Geometry::Hyperbolic,
            Coords::Spherical(_) => Geometry::Spherical,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Coords::Euclidean(p) => p.len(),
            Coords::Hyperbolic(p) => p.len(),
            Coords::Spherical(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Geodesic distance between entries `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            Coords::Euclidean(p) => p[i].distance(p[j]),
            Coords::Hyperbolic(p) => lobachevsky_distance(p[i], p[j]),
            Coords::Spherical(p) => sphere_distance(p[i], p[j]),
        }
    }

    /// The same coordinates with entry `i` moved to `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Coords {
        fn go<T: Copy + Default>(p: &[T], perm: &[usize]) -> Vec<T> {
            let mut out = vec![T::default(); p.len()];
            for (i, &x) in p.iter().enumerate() {
                out[perm[i]] = x;
            }
            out
        }
        match self {
            Coords::Euclidean(p) => Coords::Euclidean(go(p, perm)),
            Coords::Hyperbolic(p) => Coords::Hyperbolic(go(p, perm)),
            Coords::Spherical(p) => Coords::Spherical(go(p, perm)),
        }
    }
}

/// A cluster region carried through a layout, with vertices in the layout's
/// geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub cluster: u32,
    pub color: String,
    pub vertices: Coords,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    coords: Coords,
    alpha: f64,
    method: String,
    polygons: Vec<Region>,
}

impl Layout {
    pub fn new(coords: Coords, alpha: f64, method: impl Into<String>) -> Result<Self, LayoutError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(LayoutError::BadAlpha(alpha));
        }
        Ok(Self { coords, alpha, method: method.into(), polygons: Vec::new() })
    }

    pub fn euclidean(points: Vec<EuclideanPoint>, method: impl Into<String>) -> Self {
        Self { coords: Coords::Euclidean(points), alpha: 1.0, method: method.into(), polygons: Vec::new() }
    }

    /// Attaches regions; each must use the layout's geometry.
    pub fn with_polygons(mut self, polygons: Vec<Region>) -> Result<Self, LayoutError> {
        let expected = self.geometry();
        if let Some(bad) = polygons.iter().find(|p| p.vertices.geometry() != expected) {
            return Err(LayoutError::WrongGeometry { expected, found: bad.vertices.geometry() });
        }
        self.polygons = polygons;
        Ok(self)
    }

    pub fn geometry(&self) -> Geometry {
        self.coords.geometry()
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn polygons(&self) -> &[Region] {
        &self.polygons
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.coords.distance(i, j)
    }

    pub fn euclidean_points(&self) -> Result<&[EuclideanPoint], LayoutError> {
        match &self.coords {
            Coords::Euclidean(p) => Ok(p),
            other => Err(LayoutError::WrongGeometry { expected: Geometry::Euclidean, found: other.geometry() }),
        }
    }

    pub fn hyperbolic_points(&self) -> Result<&[LobachevskyPoint], LayoutError> {
        match &self.coords {
            Coords::Hyperbolic(p) => Ok(p),
            other => Err(LayoutError::WrongGeometry { expected: Geometry::Hyperbolic, found: other.geometry() }),
        }
    }

    pub fn spherical_points(&self) -> Result<&[SpherePoint], LayoutError> {
        match &self.coords {
            Coords::Spherical(p) => Ok(p),
            other => Err(LayoutError::WrongGeometry { expected: Geometry::Spherical, found: other.geometry() }),
        }
    }

    pub fn relabeled(&self, perm: &[usize]) -> Layout {
        Layout { coords: self.coords.relabeled(perm), ..self.clone() }
    }
}
