//! Undirected conflict graphs, node utilities, generators and the normalized
//! Laplacian operator.

mod generators;
mod io;
mod laplacian;

pub use generators::{gen_ba, gen_er, round_attachment, GeneratorSpec, GraphModel};
pub use io::{load_graph, read_graph_file, save_graph, write_graph_file};
pub use laplacian::{inv_sqrt_degrees, laplacian_apply, laplacian_apply_vec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("node {node} out of range for graph with {num_nodes} nodes")]
    NodeOutOfRange { node: usize, num_nodes: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("invalid utility at node {node}: {value}")]
    InvalidUtility { node: usize, value: f64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected simple graph over nodes `0..num_nodes`.
///
/// Node IDs double as the identification numbers used for tie-breaking by the
/// greedy solvers (smaller ID wins).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self { adjacency: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range IDs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            for node in [a, b] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, num_nodes: n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adjacency })
    }

    /// Wraps prebuilt adjacency lists, checking every invariant.
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let g = Self { adjacency };
        g.check_invariants()?;
        Ok(g)
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            2.0 * self.num_edges() as f64 / self.num_nodes() as f64
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_nodes() && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Set of nodes within `hops` of `v` (including `v`), by breadth-first search.
    pub fn ball(&self, v: usize, hops: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_nodes()];
        seen[v] = true;
        let mut frontier = vec![v];
        for _ in 0..hops {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &self.adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let n = self.num_nodes();
        for (i, list) in self.adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::Parameter(format!(
                        "neighbor list of node {i} is not strictly increasing"
                    )));
                }
            }
            for &j in list {
                if j >= n {
                    return Err(GraphError::NodeOutOfRange { node: j, num_nodes: n });
                }
                if j == i {
                    return Err(GraphError::SelfLoop(i));
                }
                if self.adjacency[j].binary_search(&i).is_err() {
                    return Err(GraphError::Parameter(format!("edge ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(())
    }
}

/// Non-negative finite per-node utilities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeUtilities(Vec<f64>);

impl NodeUtilities {
    pub fn new(values: Vec<f64>) -> Result<Self, GraphError> {
        if let Some((node, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(GraphError::InvalidUtility { node, value });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn check_len(&self, g: &Graph) -> Result<(), GraphError> {
        if self.len() != g.num_nodes() {
            return Err(GraphError::Dimension { expected: g.num_nodes(), got: self.len() });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for NodeUtilities {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
