use serde::{Deserialize, Serialize};

use super::AdjacencyGraph;

/// Clustering and two-hop reach of a graph, and the derived size predictor
/// `L* = I / (1 + γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureMetrics {
    pub per_vertex_clustering: Vec<f64>,
    pub mean_clustering: f64,
    pub per_vertex_two_hop: Vec<usize>,
    pub mean_two_hop: f64,
    pub l_star: f64,
}

/// Vertices of degree below 2 have clustering 0.
pub fn structure_metrics(graph: &AdjacencyGraph) -> StructureMetrics {
    let n = graph.vertex_count();
    let mut mark = vec![usize::MAX; n];
    let mut clustering = Vec::with_capacity(n);
    let mut two_hop = Vec::with_capacity(n);

    for v in 0..n {
        let ns = graph.neighbors(v);
        let k = ns.len();

        for &u in ns {
            mark[u] = v;
        }
        let links: usize = ns
            .iter()
            .map(|&u| graph.neighbors(u).iter().filter(|&&w| mark[w] == v).count())
            .sum::<usize>()
            / 2;
        clustering.push(if k < 2 {
            0.0
        } else {
            links as f64 / (k * (k - 1) / 2) as f64
        });

        // Reuse the marks: neighbors are already tagged with `v`.
        mark[v] = v;
        let mut reach = k;
        for &u in ns {
            for &w in graph.neighbors(u) {
                if mark[w] != v {
                    mark[w] = v;
                    reach += 1;
                }
            }
        }
        two_hop.push(reach);
    }

    let mean = |xs: &mut dyn Iterator<Item = f64>| {
        if n == 0 {
            0.0
        } else {
            xs.sum::<f64>() / n as f64
        }
    };
    let mean_clustering = mean(&mut clustering.iter().copied());
    let mean_two_hop = mean(&mut two_hop.iter().map(|&c| c as f64));
    StructureMetrics {
        per_vertex_clustering: clustering,
        mean_clustering,
        per_vertex_two_hop: two_hop,
        mean_two_hop,
        l_star: mean_two_hop / (1.0 + mean_clustering),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{gen_ring_local, gen_ring_longrange};

    fn complete(n: usize) -> AdjacencyGraph {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        AdjacencyGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn complete_graph() {
        let m = structure_metrics(&complete(6));
        assert_eq!(m.mean_clustering, 1.0);
        assert!(m.per_vertex_two_hop.iter().all(|&i| i == 5));
        assert_eq!(m.l_star, 2.5);
    }

    #[test]
    fn complete_graph_l_star_is_half_of_l_minus_one() {
        for n in 3..15 {
            assert_eq!(structure_metrics(&complete(n)).l_star, (n - 1) as f64 / 2.0);
        }
    }

    #[test]
    fn ring_degree_four() {
        let m = structure_metrics(&gen_ring_local(12, 4).unwrap());
        assert!(m.per_vertex_clustering.iter().all(|&c| c == 0.5));
        assert!(m.per_vertex_two_hop.iter().all(|&c| c == 8));
    }

    #[test]
    fn star_graph_has_no_clustering() {
        let g = AdjacencyGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let m = structure_metrics(&g);
        assert!(m.per_vertex_clustering.iter().all(|&c| c == 0.0));
        assert_eq!(m.per_vertex_two_hop, vec![5; 6]);
    }

    #[test]
    fn vertex_transitive_graphs_are_uniform() {
        for g in [gen_ring_local(30, 6).unwrap(), gen_ring_longrange(30, 5).unwrap()] {
            let m = structure_metrics(&g);
            assert!(m.per_vertex_clustering.windows(2).all(|w| w[0] == w[1]));
            assert!(m.per_vertex_two_hop.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
