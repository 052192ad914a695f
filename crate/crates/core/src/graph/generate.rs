use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

const MAX_ATTEMPTS: usize = 1000;

/// Graph families used by the experiments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    Path(usize),
    Cycle(usize),
    Grid { width: usize, height: usize },
    /// Triangle-shaped patch of the triangular lattice; row `r` holds `r + 1`
    /// nodes.
    TriangularLattice { rows: usize },
    /// The 3-cube graph Q3.
    Cube,
    /// Full binary tree with levels `0..=depth`.
    BinaryTree { depth: usize },
    /// Uniform random labelled tree (Prüfer sequence).
    RandomTree { n: usize, seed: u64 },
    /// `m` distinct edges chosen uniformly at random, redrawn until connected.
    Random { n: usize, m: usize, seed: u64 },
}

pub fn generate(kind: &GraphKind) -> Result<Graph, GraphError> {
    match *kind {
        GraphKind::Path(n) => {
            positive(n, "path length")?;
            Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
        }
        GraphKind::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::Parameters(format!("cycle needs at least 3 nodes, got {n}")));
            }
            Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
        }
        GraphKind::Grid { width, height } => {
            positive(width, "grid width")?;
            positive(height, "grid height")?;
            let id = |x: usize, y: usize| y * width + x;
            let mut edges = Vec::new();
            for y in 0..height {
                for x in 0..width {
                    if x + 1 < width {
                        edges.push((id(x, y), id(x + 1, y)));
                    }
                    if y + 1 < height {
                        edges.push((id(x, y), id(x, y + 1)));
                    }
                }
            }
            Graph::from_edges(width * height, &edges)
        }
        GraphKind::TriangularLattice { rows } => {
            positive(rows, "lattice rows")?;
            let id = |r: usize, j: usize| r * (r + 1) / 2 + j;
            let mut edges = Vec::new();
            for r in 0..rows {
                for j in 0..=r {
                    if j < r {
                        edges.push((id(r, j), id(r, j + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, j), id(r + 1, j)));
                        edges.push((id(r, j), id(r + 1, j + 1)));
                    }
                }
            }
            Graph::from_edges(rows * (rows + 1) / 2, &edges)
        }
        GraphKind::Cube => {
            let mut edges = Vec::new();
            for u in 0..8usize {
                for bit in 0..3 {
                    let v = u ^ (1 << bit);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(8, &edges)
        }
        GraphKind::BinaryTree { depth } => {
            if depth > 24 {
                return Err(GraphError::Parameters(format!("binary tree depth {depth} is too large")));
            }
            let n = (1usize << (depth + 1)) - 1;
            Graph::from_edges(n, &(1..n).map(|i| ((i - 1) / 2, i)).collect::<Vec<_>>())
        }
        GraphKind::RandomTree { n, seed } => {
            positive(n, "tree size")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Graph::from_edges(n, &prufer_tree(n, &mut rng))
        }
        GraphKind::Random { n, m, seed } => random_connected(n, m, seed),
    }
}

fn positive(x: usize, what: &str) -> Result<(), GraphError> {
    if x == 0 {
        return Err(GraphError::Parameters(format!("{what} must be positive")));
    }
    Ok(())
}

fn prufer_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n == 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| degree[i] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    edges
}

fn random_connected(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    positive(n, "node count")?;
    let max_edges = n * (n - 1) / 2;
    if m + 1 < n || m > max_edges {
        return Err(GraphError::Parameters(format!(
            "{m} edges cannot connect {n} nodes (need {} to {max_edges})",
            n - 1
        )));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut chosen = BTreeSet::new();
        while chosen.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                chosen.insert((u.min(v), u.max(v)));
            }
        }
        let edges: Vec<_> = chosen.into_iter().collect();
        match Graph::from_edges(n, &edges) {
            Ok(g) => return Ok(g),
            Err(GraphError::Disconnected { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GraphError::RetriesExhausted(MAX_ATTEMPTS))
}
