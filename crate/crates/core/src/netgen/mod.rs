//! Population structures: the five network families, structural metrics and
//! the plain-text edge-list format.

mod edgelist;
mod metrics;
mod random;
mod ring;
mod social;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use edgelist::{parse_edge_list, read_edge_list, write_edge_list};
pub use metrics::{structure_metrics, StructureMetrics};
pub use random::gen_random_regular;
pub use ring::{gen_ring_local, gen_ring_longrange, ring_distance};
pub use social::gen_social;

/// Undirected simple graph stored as per-vertex neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    neighbors: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    /// Graph with `size` vertices and no edges.
    pub fn empty(size: usize) -> Self {
        Self {
            neighbors: vec![Vec::new(); size],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut graph = Self::empty(size);
        for &(a, b) in edges {
            if a >= size || b >= size {
                return Err(Error::invalid("edges", format!("edge {a}-{b} out of range")));
            }
            if a == b {
                return Err(Error::invalid("edges", format!("self-loop at {a}")));
            }
            if graph.has_edge(a, b) {
                return Err(Error::invalid("edges", format!("duplicate edge {a}-{b}")));
            }
            graph.add_edge(a, b);
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        if self.neighbors.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.vertex_count() as f64
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.neighbors.first()?.len();
        self.neighbors.iter().all(|n| n.len() == first).then_some(first)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (short, other) = if self.neighbors[a].len() <= self.neighbors[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors[short].contains(&other)
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b && !self.has_edge(a, b));
        self.neighbors[a].push(b);
        self.neighbors[b].push(a);
    }

    pub(crate) fn remove_edge(&mut self, a: usize, b: usize) {
        let pos = self.neighbors[a].iter().position(|&x| x == b);
        if let Some(p) = pos {
            self.neighbors[a].swap_remove(p);
        }
        let pos = self.neighbors[b].iter().position(|&x| x == a);
        if let Some(p) = pos {
            self.neighbors[b].swap_remove(p);
        }
    }

    /// Checks symmetry, absence of self-loops and duplicate entries.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        for (i, ns) in self.neighbors.iter().enumerate() {
            let mut seen = ns.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid("graph", format!("duplicate neighbor at vertex {i}")));
            }
            for &j in ns {
                if j >= n {
                    return Err(Error::invalid("graph", format!("neighbor {j} out of range")));
                }
                if j == i {
                    return Err(Error::invalid("graph", format!("self-loop at vertex {i}")));
                }
                if !self.neighbors[j].contains(&i) {
                    return Err(Error::invalid("graph", format!("asymmetric edge {i}->{j}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.neighbors[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.vertex_count());
        let mut neighbors = vec![Vec::new(); self.vertex_count()];
        for (v, ns) in self.neighbors.iter().enumerate() {
            neighbors[perm[v]] = ns.iter().map(|&u| perm[u]).collect();
        }
        Self { neighbors }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    FullyMixed,
    RandomRegular,
    RingLocal,
    RingLongRange,
    Social,
}

impl NetworkKind {
    pub fn is_regular(self) -> bool {
        matches!(
            self,
            NetworkKind::RandomRegular | NetworkKind::RingLocal | NetworkKind::RingLongRange
        )
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetworkKind::FullyMixed => "fully_mixed",
            NetworkKind::RandomRegular => "random_regular",
            NetworkKind::RingLocal => "ring_local",
            NetworkKind::RingLongRange => "ring_long_range",
            NetworkKind::Social => "social",
        })
    }
}

/// Description of a population structure.
///
/// `degree` is N−1 and is required for the regular families; `f1`/`f2` only
/// matter for [`NetworkKind::Social`]. A fully mixed spec carries no
/// adjacency, its match size comes from the game configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub kind: NetworkKind,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default)]
    pub f1: f64,
    #[serde(default)]
    pub f2: f64,
    #[serde(default)]
    pub seed: u64,
}

impl NetworkSpec {
    pub fn fully_mixed(size: usize) -> Self {
        Self::new(NetworkKind::FullyMixed, size, None)
    }

    pub fn regular(kind: NetworkKind, size: usize, degree: usize, seed: u64) -> Self {
        Self {
            seed,
            ..Self::new(kind, size, Some(degree))
        }
    }

    pub fn social(size: usize, f1: f64, f2: f64, seed: u64) -> Self {
        Self {
            f1,
            f2,
            seed,
            ..Self::new(NetworkKind::Social, size, None)
        }
    }

    fn new(kind: NetworkKind, size: usize, degree: Option<usize>) -> Self {
        Self {
            kind,
            size,
            degree,
            f1: 0.0,
            f2: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::invalid("size", "population size must be positive"));
        }
        if self.kind.is_regular() {
            let degree = self
                .degree
                .ok_or_else(|| Error::invalid("degree", format!("required for {}", self.kind)))?;
            if degree < 1 || degree >= self.size {
                return Err(Error::invalid(
                    "degree",
                    format!("need 1 <= degree < L, got degree={degree}, L={}", self.size),
                ));
            }
        }
        if self.kind == NetworkKind::Social {
            if self.size < 2 {
                return Err(Error::invalid("size", "social networks need L >= 2"));
            }
            if !(self.f1 >= 0.0 && self.f1.is_finite()) {
                return Err(Error::invalid("f1", "must be a finite nonnegative real"));
            }
            if !(self.f2 >= 0.0 && self.f2.is_finite()) {
                return Err(Error::invalid("f2", "must be a finite nonnegative real"));
            }
        }
        Ok(())
    }

    /// Generates the graph, or `None` for a fully mixed population.
    pub fn build(&self) -> Result<Option<AdjacencyGraph>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let degree = self.degree.unwrap_or(0);
        let graph = match self.kind {
            NetworkKind::FullyMixed => return Ok(None),
            NetworkKind::RingLocal => gen_ring_local(self.size, degree)?,
            NetworkKind::RingLongRange => gen_ring_longrange(self.size, degree)?,
            NetworkKind::RandomRegular => gen_random_regular(self.size, degree, &mut rng)?,
            NetworkKind::Social => gen_social(self.size, self.f1, self.f2, &mut rng)?,
        };
        Ok(Some(graph))
    }
}
