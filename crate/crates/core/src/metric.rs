//! Metric edges and the metric surplus of a cost function.
//!
//! An edge is metric when its cost equals the least-cost distance between
//! its endpoints. Every connected graph has at least `n - 1` metric edges.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{ExtCost, SparseGraph};
use crate::paths::shortest_path_masked;

pub fn is_metric_edge(graph: &SparseGraph, edge: usize) -> bool {
    let e = graph.edge(edge);
    let sp = shortest_path_masked(graph, e.u, &vec![false; graph.n()]);
    sp.dist[e.v] == ExtCost::Finite(e.cost)
}

/// Metric flag per edge id. One Dijkstra per vertex with incident edges.
pub fn metric_flags(graph: &SparseGraph) -> Vec<bool> {
    let mut flags = vec![false; graph.m()];
    let free = vec![false; graph.n()];
    for u in 0..graph.n() {
        // each edge is checked from its lower endpoint
        if !graph.neighbors(u).iter().any(|&(w, _)| w > u) {
            continue;
        }
        let sp = shortest_path_masked(graph, u, &free);
        for &(w, e) in graph.neighbors(u) {
            if w > u {
                flags[e] = sp.dist[w] == ExtCost::Finite(graph.edge(e).cost);
            }
        }
    }
    flags
}

pub fn count_metric_edges(graph: &SparseGraph) -> usize {
    metric_flags(graph).into_iter().filter(|&f| f).count()
}

/// `(metric edges - (n - 1)) / (m - (n - 1))`, defined as 1 for trees.
pub fn metric_surplus(graph: &SparseGraph) -> f64 {
    let forced = graph.n() - 1;
    let spare = graph.m() - forced;
    if spare == 0 {
        return 1.0;
    }
    (count_metric_edges(graph) - forced) as f64 / spare as f64
}
