use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use super::{Graph, GraphError};

/// Dense symmetric matrix of shortest-path distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
    d_max: f64,
    d_min: f64,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major entries, checking symmetry, a zero
    /// diagonal and positive finite off-diagonal entries.
    pub fn from_rows(n: usize, d: Vec<f64>) -> Result<Self, GraphError> {
        if d.len() != n * n {
            return Err(GraphError::Parameters(format!("expected {} entries, got {}", n * n, d.len())));
        }
        let mut d_max = 0.0f64;
        let mut d_min = f64::INFINITY;
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(GraphError::Parameters(format!("non-zero diagonal at {i}")));
            }
            for j in i + 1..n {
                let x = d[i * n + j];
                if x != d[j * n + i] || !(x > 0.0 && x.is_finite()) {
                    return Err(GraphError::Parameters(format!("invalid entry at ({i}, {j})")));
                }
                d_max = d_max.max(x);
                d_min = d_min.min(x);
            }
        }
        if n < 2 {
            d_min = 0.0;
        }
        Ok(Self { n, d, d_max, d_min })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Longest shortest path; zero for fewer than two nodes.
    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    /// Shortest shortest path; zero for fewer than two nodes.
    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// The matrix with rows and columns permuted so that entry
    /// `(perm[i], perm[j])` of the result equals entry `(i, j)` of `self`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[perm[i] * n + perm[j]] = self.get(i, j);
            }
        }
        Self { n, d, d_max: self.d_max, d_min: self.d_min }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn bfs(g: &Graph, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.len()];
    let mut queue = VecDeque::new();
    dist[source] = 0.0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.neighbors(u) {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + 1.0;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn dijkstra(g: &Graph, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in g.neighbors(u) {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
    dist
}

/// All-pairs shortest paths: one BFS per source for unit weights, Dijkstra
/// otherwise. Sources are processed in parallel.
pub fn apsp(g: &Graph) -> Result<DistanceMatrix, GraphError> {
    let n = g.len();
    let unit = g.is_unit_weight();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| if unit { bfs(g, s) } else { dijkstra(g, s) })
        .collect();
    if let Some(j) = rows[0].iter().position(|d| d.is_infinite()) {
        let mut component: Vec<usize> = (0..n).filter(|&k| rows[j][k].is_finite()).collect();
        component.sort_unstable();
        return Err(GraphError::Disconnected { component });
    }
    let mut d = vec![0.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        d[i * n..(i + 1) * n].copy_from_slice(row);
    }
    // Dijkstra sums can differ in the last bit between directions.
    for i in 0..n {
        for j in i + 1..n {
            let m = d[i * n + j].min(d[j * n + i]);
            d[i * n + j] = m;
            d[j * n + i] = m;
        }
    }
    DistanceMatrix::from_rows(n, d)
}
