//! Ring lattices, with and without long-range chords.

use super::AdjacencyGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Clockwise,
    CounterClockwise,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Direction::Clockwise => Direction::CounterClockwise,
            Direction::CounterClockwise => Direction::Clockwise,
        }
    }
}

fn check_range(size: usize, degree: usize) -> Result<()> {
    if degree < 1 || degree >= size {
        return Err(Error::invalid(
            "degree",
            format!("need 1 <= degree < L, got degree={degree}, L={size}"),
        ));
    }
    Ok(())
}

/// Each vertex linked to the `degree / 2` nearest vertices on either side.
pub(crate) fn even_ring(size: usize, degree: usize) -> AdjacencyGraph {
    debug_assert!(degree % 2 == 0 && degree < size);
    let mut graph = AdjacencyGraph::empty(size);
    for i in 0..size {
        for offset in 1..=degree / 2 {
            let j = (i + offset) % size;
            if !graph.has_edge(i, j) {
                graph.add_edge(i, j);
            }
        }
    }
    graph
}

/// Ring where every vertex has the `degree` closest vertices as neighbors.
///
/// Odd degrees start from the `degree − 1` ring and then sweep the circle
/// clockwise. An under-degree vertex is joined to its first non-neighbor in
/// the current direction, provided that vertex still has spare degree;
/// otherwise the opposite direction is tried. The direction flips at every
/// vertex visited. The sweep repeats until every vertex is saturated, a pass
/// makes no progress, or `2L` passes have run.
pub fn gen_ring_local(size: usize, degree: usize) -> Result<AdjacencyGraph> {
    check_range(size, degree)?;
    if degree % 2 == 0 {
        return Ok(even_ring(size, degree));
    }
    if size % 2 == 1 {
        return Err(Error::InfeasibleTopology {
            size,
            degree,
            reason: "odd degree on an odd number of vertices".into(),
        });
    }
    let mut graph = even_ring(size, degree - 1);
    complete_odd_degree(&mut graph, degree)?;
    Ok(graph)
}

fn first_partner(graph: &AdjacencyGraph, v: usize, target: usize, dir: Direction) -> Option<usize> {
    let size = graph.vertex_count();
    (1..size)
        .map(|step| match dir {
            Direction::Clockwise => (v + step) % size,
            Direction::CounterClockwise => (v + size - step) % size,
        })
        .find(|&u| !graph.has_edge(v, u))
        .filter(|&u| graph.degree(u) < target)
}

fn complete_odd_degree(graph: &mut AdjacencyGraph, target: usize) -> Result<()> {
    let size = graph.vertex_count();
    let mut dir = Direction::Clockwise;
    for _pass in 0..2 * size {
        let mut progressed = false;
        for v in 0..size {
            if graph.degree(v) < target {
                let partner = first_partner(graph, v, target, dir)
                    .or_else(|| first_partner(graph, v, target, dir.flip()));
                if let Some(u) = partner {
                    graph.add_edge(v, u);
                    progressed = true;
                }
            }
            dir = dir.flip();
        }
        if graph.degrees().iter().all(|&d| d == target) {
            return Ok(());
        }
        if !progressed {
            break;
        }
    }
    let short = graph.degrees().iter().filter(|&&d| d < target).count();
    Err(Error::InfeasibleTopology {
        size,
        degree: target,
        reason: format!("odd-degree completion left {short} vertices under-degree"),
    })
}

/// Ring lattice plus chords to the far side of the circle.
///
/// With N = degree + 1 even, one chord per vertex joins it to its antipode
/// (requires even L). With N odd, two chords join `i` to `i ± d` where `d` is
/// the offset of the vertices nearest the antipode (`L/2 − 1` for even L,
/// `(L − 1)/2` for odd L). The remaining budget, `degree − 1` or
/// `degree − 2`, forms the local ring and must be at least 2.
pub fn gen_ring_longrange(size: usize, degree: usize) -> Result<AdjacencyGraph> {
    check_range(size, degree)?;
    let long = if degree % 2 == 1 { 1 } else { 2 };
    let local = degree.saturating_sub(long);
    if local < 2 {
        return Err(Error::InfeasibleTopology {
            size,
            degree,
            reason: format!("short-range budget {local} cannot form a ring"),
        });
    }
    let mut graph = even_ring(size, local);
    if long == 1 {
        add_antipodal(&mut graph, degree)?;
    } else {
        let offset = if size % 2 == 0 { size / 2 - 1 } else { (size - 1) / 2 };
        add_chords(&mut graph, offset, degree)?;
    }
    Ok(graph)
}

/// Joins every vertex to the vertex opposite on the ring.
pub(crate) fn add_antipodal(graph: &mut AdjacencyGraph, degree: usize) -> Result<()> {
    let size = graph.vertex_count();
    if size % 2 == 1 {
        return Err(Error::InfeasibleTopology {
            size,
            degree,
            reason: "antipodal chords need an even number of vertices".into(),
        });
    }
    for i in 0..size / 2 {
        let j = i + size / 2;
        if graph.has_edge(i, j) {
            return Err(Error::InfeasibleTopology {
                size,
                degree,
                reason: "antipodal chord collides with a local edge".into(),
            });
        }
        graph.add_edge(i, j);
    }
    Ok(())
}

fn add_chords(graph: &mut AdjacencyGraph, offset: usize, degree: usize) -> Result<()> {
    let size = graph.vertex_count();
    for i in 0..size {
        let j = (i + offset) % size;
        if i == j || graph.has_edge(i, j) {
            return Err(Error::InfeasibleTopology {
                size,
                degree,
                reason: format!("chord offset {offset} collides with an existing edge"),
            });
        }
        graph.add_edge(i, j);
    }
    if graph.regular_degree() != Some(degree) {
        return Err(Error::InfeasibleTopology {
            size,
            degree,
            reason: "chords did not yield a regular graph".into(),
        });
    }
    Ok(())
}

/// Shortest distance between two positions on a ring of `size` vertices.
pub fn ring_distance(size: usize, a: usize, b: usize) -> usize {
    let d = a.abs_diff(b) % size;
    d.min(size - d)
}
