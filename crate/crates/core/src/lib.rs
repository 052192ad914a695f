//! Graph layout in the hyperbolic plane, on the sphere and in the Euclidean
//! plane.
//!
//! Three layout methods are provided:
//!
//! * [`projection`] lifts an existing Euclidean drawing into the hyperbolic
//!   plane with the area-preserving inverse Lambert azimuthal projection.
//! * [`force`] runs a Kamada–Kawai style layout directly in the hyperbolic
//!   plane through per-node tangent planes.
//! * [`hmds`] minimizes stress by stochastic gradient descent in any of the
//!   three geometries.
//!
//! [`metrics`] scores the results, [`render`] draws them in the Poincaré
//! disk, and [`layout_file`] stores them.

pub mod force;
pub mod geometry;
pub mod graph;
pub mod hmds;
pub mod layout;
pub mod layout_file;
pub mod metrics;
pub mod projection;
pub mod render;

pub use graph::{apsp, generate, DistanceMatrix, Graph, GraphError, GraphKind, InputFormat};
pub use layout::{Coords, Geometry, Layout, LayoutError};
