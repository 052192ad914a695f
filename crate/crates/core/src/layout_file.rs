//! JSON interchange format for computed layouts.
//!
//! ```json
//! {
//!   "version": 1,
//!   "graph": { "nodes": [{"id": 0, "label": "a", "cluster": 2}], "edges": [[0, 1], [1, 2, 0.5]] },
//!   "geometry": "hyperbolic",
//!   "method": "hmds",
//!   "alpha": 2.0,
//!   "seed": 1,
//!   "coords": [[u, v], ...],
//!   "polygons": [{"cluster": 2, "vertices": [[u, v], ...], "color": "red"}],
//!   "trace": [[1, stress, max_displacement], ...],
//!   "source": { "coords": [[x, y], ...], "polygons": [...], "rho_base": 6.0, "coverage": 1.0 }
//! }
//! ```
//!
//! Hyperbolic coordinates are Lobachevsky `[u, v]`, spherical ones unit
//! vectors `[x, y, z]`, Euclidean ones `[x, y]`. `source` is present on
//! projected layouts and holds the Euclidean drawing they were lifted from.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{EuclideanPoint, GeometryError, LobachevskyPoint, SpherePoint};
use crate::graph::{Edge, Graph, GraphError, Node};
use crate::hmds::TraceRow;
use crate::layout::{Coords, Geometry, Layout, LayoutError, Region};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LayoutFileError {
    #[error("malformed layout file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported layout file version {0}")]
    Version(u32),
    #[error("{what}: expected {expected} numbers per point, found {found}")]
    Arity { what: &'static str, expected: usize, found: usize },
    #[error("{0} coordinates given for {1} nodes")]
    Count(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: usize,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeRecord {
    Unit(usize, usize),
    Weighted(usize, usize, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonRecord {
    pub cluster: u32,
    pub vertices: Vec<Vec<f64>>,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceRecord {
    pub coords: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polygons: Vec<PolygonRecord>,
    pub rho_base: f64,
    pub coverage: f64,
}

/// In-memory form of a layout file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub version: u32,
    pub graph: GraphRecord,
    pub geometry: String,
    pub method: String,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub coords: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polygons: Vec<PolygonRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(usize, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceRecord>,
}

/// Euclidean drawing a projected layout came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub layout: Layout,
    pub rho_base: f64,
    pub coverage: f64,
}

fn coords_rows(c: &Coords) -> Vec<Vec<f64>> {
    match c {
        Coords::Euclidean(p) => p.iter().map(|q| vec![q.x, q.y]).collect(),
        Coords::Hyperbolic(p) => p.iter().map(|q| vec![q.u, q.v]).collect(),
        Coords::Spherical(p) => p.iter().map(|q| q.coords().to_vec()).collect(),
    }
}

fn rows_coords(geometry: Geometry, rows: &[Vec<f64>], what: &'static str) -> Result<Coords, LayoutFileError> {
    let expected = if geometry == Geometry::Spherical { 3 } else { 2 };
    if let Some(bad) = rows.iter().find(|r| r.len() != expected) {
        return Err(LayoutFileError::Arity { what, expected, found: bad.len() });
    }
    Ok(match geometry {
        Geometry::Euclidean => Coords::Euclidean(rows.iter().map(|r| EuclideanPoint::new(r[0], r[1])).collect()),
        Geometry::Hyperbolic => Coords::Hyperbolic(rows.iter().map(|r| LobachevskyPoint::new(r[0], r[1])).collect()),
        Geometry::Spherical => {
            Coords::Spherical(rows.iter().map(|r| SpherePoint::new([r[0], r[1], r[2]])).collect::<Result<_, _>>()?)
        }
    })
}

fn polygon_records(regions: &[Region]) -> Vec<PolygonRecord> {
    regions
        .iter()
        .map(|r| PolygonRecord { cluster: r.cluster, vertices: coords_rows(&r.vertices), color: r.color.clone() })
        .collect()
}

fn regions(geometry: Geometry, records: &[PolygonRecord]) -> Result<Vec<Region>, LayoutFileError> {
    records
        .iter()
        .map(|p| {
            Ok(Region {
                cluster: p.cluster,
                color: p.color.clone(),
                vertices: rows_coords(geometry, &p.vertices, "polygon vertex")?,
            })
        })
        .collect()
}

impl LayoutFile {
    pub fn new(g: &Graph, layout: &Layout, seed: Option<u64>) -> Result<Self, LayoutError> {
        if g.len() != layout.len() {
            return Err(LayoutError::SizeMismatch { layout: layout.len(), graph: g.len() });
        }
        let nodes = g
            .nodes()
            .iter()
            .map(|n| NodeRecord { id: n.id, label: n.label.clone(), cluster: n.cluster })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| if e.weight == 1.0 { EdgeRecord::Unit(e.u, e.v) } else { EdgeRecord::Weighted(e.u, e.v, e.weight) })
            .collect();
        Ok(Self {
            version: FORMAT_VERSION,
            graph: GraphRecord { nodes, edges },
            geometry: layout.geometry().name().to_string(),
            method: layout.method().to_string(),
            alpha: layout.alpha(),
            seed,
            coords: coords_rows(layout.coords()),
            polygons: polygon_records(layout.polygons()),
            trace: None,
            source: None,
        })
    }

    pub fn with_trace(mut self, trace: &[TraceRow]) -> Self {
        self.trace = Some(trace.iter().map(|r| (r.iteration, r.stress, r.max_displacement)).collect());
        self
    }

    pub fn with_source(mut self, source: &Layout, rho_base: f64, coverage: f64) -> Result<Self, LayoutError> {
        let coords = coords_rows(&Coords::Euclidean(source.euclidean_points()?.to_vec()));
        self.source = Some(SourceRecord { coords, polygons: polygon_records(source.polygons()), rho_base, coverage });
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self, LayoutFileError> {
        let file: LayoutFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(LayoutFileError::Version(file.version));
        }
        // Surface structural problems on read rather than on first use.
        let g = file.graph()?;
        let l = file.layout()?;
        if l.len() != g.len() {
            return Err(LayoutFileError::Count(l.len(), g.len()));
        }
        file.source()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("layout files always serialize");
        s.push('\n');
        s
    }

    pub fn graph(&self) -> Result<Graph, LayoutFileError> {
        let nodes = self
            .graph
            .nodes
            .iter()
            .map(|r| Node { id: r.id, label: r.label.clone(), cluster: r.cluster, pos: None })
            .collect();
        let edges = self
            .graph
            .edges
            .iter()
            .map(|&e| match e {
                EdgeRecord::Unit(u, v) => Edge { u, v, weight: 1.0 },
                EdgeRecord::Weighted(u, v, weight) => Edge { u, v, weight },
            })
            .collect();
        Ok(Graph::new(nodes, edges, Vec::new())?)
    }

    pub fn geometry(&self) -> Result<Geometry, LayoutFileError> {
        Ok(self.geometry.parse()?)
    }

    pub fn layout(&self) -> Result<Layout, LayoutFileError> {
        let geometry = self.geometry()?;
        let coords = rows_coords(geometry, &self.coords, "coordinate")?;
        Ok(Layout::new(coords, self.alpha, self.method.clone())?.with_polygons(regions(geometry, &self.polygons)?)?)
    }

    pub fn trace(&self) -> Vec<TraceRow> {
        self.trace
            .iter()
            .flatten()
            .map(|&(iteration, stress, max_displacement)| TraceRow { iteration, stress, max_displacement })
            .collect()
    }

    pub fn source(&self) -> Result<Option<Source>, LayoutFileError> {
        let Some(src) = &self.source else { return Ok(None) };
        let coords = rows_coords(Geometry::Euclidean, &src.coords, "source coordinate")?;
        if coords.len() != self.coords.len() {
            return Err(LayoutFileError::Count(coords.len(), self.coords.len()));
        }
        let layout = Layout::new(coords, 1.0, "euclidean-input")?
            .with_polygons(regions(Geometry::Euclidean, &src.polygons)?)?;
        Ok(Some(Source { layout, rho_base: src.rho_base, coverage: src.coverage }))
    }
}
