//! Undirected, connected input graphs and their shortest-path metric.

mod apsp;
mod dot;
mod edgelist;
mod generate;

use std::collections::HashSet;

use thiserror::Error;

use crate::geometry::EuclideanPoint;

pub use apsp::{apsp, DistanceMatrix};
pub use generate::{generate, GraphKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0} -- {1} has non-positive or non-finite weight {2}")]
    BadWeight(usize, usize, f64),
    #[error("edge {0} -- {1} references a node outside 0..{2}")]
    UnknownNode(usize, usize, usize),
    #[error("graph is disconnected: nodes {component:?} are unreachable from node 0")]
    Disconnected { component: Vec<usize> },
    #[error("graph has no nodes")]
    Empty,
    #[error("invalid generator parameters: {0}")]
    Parameters(String),
    #[error("could not draw a connected graph after {0} attempts")]
    RetriesExhausted(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub label: String,
    pub cluster: Option<u32>,
    /// Precomputed Euclidean position, when the input carried one.
    pub pos: Option<EuclideanPoint>,
}

impl Node {
    pub fn new(id: usize) -> Self {
        Self { id, label: id.to_string(), cluster: None, pos: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Cluster region given as a vertex list in layout coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub cluster: u32,
    pub vertices: Vec<EuclideanPoint>,
    pub color: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    EdgeList,
    Dot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    polygons: Vec<Polygon>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Validates ids, loops, duplicates, weights and connectivity.
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, polygons: Vec<Polygon>) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = nodes.len();
        let mut nodes = nodes;
        for (i, node) in nodes.iter_mut().enumerate() {
            node.id = i;
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(GraphError::UnknownNode(e.u, e.v, n));
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(GraphError::BadWeight(e.u, e.v, e.weight));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
        }
        let graph = Self { nodes, edges, polygons, adjacency };
        graph.check_connected()?;
        Ok(graph)
    }

    /// Unit-weight graph on `n` nodes labelled by index.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let nodes = (0..n).map(Node::new).collect();
        let edges = edges.iter().map(|&(u, v)| Edge { u, v, weight: 1.0 }).collect();
        Self::new(nodes, edges, Vec::new())
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let reached = self.reachable_from(0);
        if let Some(start) = reached.iter().position(|r| !r) {
            let mut component: Vec<usize> = self
                .reachable_from(start)
                .iter()
                .enumerate()
                .filter_map(|(i, &r)| r.then_some(i))
                .collect();
            component.sort_unstable();
            return Err(GraphError::Disconnected { component });
        }
        Ok(())
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut reached = vec![false; self.len()];
        let mut stack = vec![start];
        reached[start] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !reached[v] {
                    reached[v] = true;
                    stack.push(v);
                }
            }
        }
        reached
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Node positions, if every node has one.
    pub fn positions(&self) -> Option<Vec<EuclideanPoint>> {
        self.nodes.iter().map(|n| n.pos).collect()
    }

    /// Sorted edge list with `u < v`, convenient for comparisons.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut set: Vec<_> = self.edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        set.sort_unstable();
        set
    }
}

/// Parses a graph and returns the warnings raised for ignored input.
pub fn parse_graph_with_warnings(input: &str, format: InputFormat) -> Result<(Graph, Vec<String>), GraphError> {
    match format {
        InputFormat::EdgeList => edgelist::parse(input).map(|g| (g, Vec::new())),
        InputFormat::Dot => dot::parse(input),
    }
}

pub fn parse_graph(input: &str, format: InputFormat) -> Result<Graph, GraphError> {
    let (graph, warnings) = parse_graph_with_warnings(input, format)?;
    for w in warnings {
        log::warn!("{w}");
    }
    Ok(graph)
}

/// Edge-list text for `g`: one `u v` line per edge, with the weight appended
/// when it is not one.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {} nodes, {} edges\n", g.len(), g.edge_count()));
    for e in g.edges() {
        if e.weight == 1.0 {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        } else {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
        }
    }
    out
}
