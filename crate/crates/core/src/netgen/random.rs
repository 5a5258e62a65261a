use rand::Rng;

use super::ring::{add_antipodal, even_ring};
use super::AdjacencyGraph;
use crate::error::{Error, Result};

/// Random `degree`-regular graph on `size` vertices.
///
/// Starts from the even ring (plus antipodal chords when `degree` is odd) and
/// performs `2·L²` attempted double-edge swaps: edges a–b and c–d become a–c
/// and b–d when the four endpoints are distinct and neither new edge exists.
/// Rejected attempts count towards the total.
pub fn gen_random_regular<R: Rng + ?Sized>(size: usize, degree: usize, rng: &mut R) -> Result<AdjacencyGraph> {
    if degree < 1 || degree >= size {
        return Err(Error::invalid(
            "degree",
            format!("need 1 <= degree < L, got degree={degree}, L={size}"),
        ));
    }
    let mut graph = seed_graph(size, degree)?;
    let attempts = 2 * size * size;
    degree_preserving_swaps(&mut graph, attempts, rng);
    Ok(graph)
}

fn seed_graph(size: usize, degree: usize) -> Result<AdjacencyGraph> {
    if degree % 2 == 0 {
        return Ok(even_ring(size, degree));
    }
    let mut graph = even_ring(size, degree - 1);
    add_antipodal(&mut graph, degree)?;
    Ok(graph)
}

/// Runs `attempts` double-edge swap attempts; returns how many succeeded.
pub(crate) fn degree_preserving_swaps<R: Rng + ?Sized>(
    graph: &mut AdjacencyGraph,
    attempts: usize,
    rng: &mut R,
) -> usize {
    let mut edges = graph.edges();
    if edges.len() < 2 {
        return 0;
    }
    let mut accepted = 0;
    for _ in 0..attempts {
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        if a == c || a == d || b == c || b == d {
            continue;
        }
        if graph.has_edge(a, c) || graph.has_edge(b, d) {
            continue;
        }
        graph.remove_edge(a, b);
        graph.remove_edge(c, d);
        graph.add_edge(a, c);
        graph.add_edge(b, d);
        edges[i] = (a, c);
        edges[j] = (b, d);
        accepted += 1;
    }
    accepted
}
