use alloc::string::String;
use alloc::vec::Vec;

use super::GenError;
use crate::graph::{Cost, Instance, Prize, SparseGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoadEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: u64,
    pub cost: Cost,
}

/// Road graph whose prize lives on the edges (their lengths).
#[derive(Clone, Debug, PartialEq)]
pub struct RoadNetwork {
    pub labels: Vec<u64>,
    pub prizes: Vec<Prize>,
    pub edges: Vec<RoadEdge>,
}

/// Moves edge prize onto vertices. Every edge `(i, j)` becomes `(i, k)`,
/// `(k, j)` through a fresh vertex `k` with prize `length(i, j)`, where `i`
/// is the endpoint with the lower label. `c(i, k) = c(i, j)` and
/// `c(k, j) = 0`. Fresh labels continue after the largest existing label.
pub fn edge_split_transform(
    name: impl Into<String>,
    net: &RoadNetwork,
    root: VertexId,
    quota: Prize,
) -> Result<Instance, GenError> {
    let n = net.labels.len();
    let next_label = net.labels.iter().copied().max().map_or(0, |l| l + 1);
    let mut labels = net.labels.clone();
    let mut prizes = net.prizes.clone();
    let mut edges = Vec::with_capacity(2 * net.edges.len());
    for (idx, e) in net.edges.iter().enumerate() {
        let (i, j) = if net.labels[e.u] <= net.labels[e.v] { (e.u, e.v) } else { (e.v, e.u) };
        let k = n + idx;
        labels.push(next_label + idx as u64);
        prizes.push(e.length);
        edges.push((i, k, e.cost));
        edges.push((k, j, 0));
    }
    let graph = SparseGraph::with_labels(labels, prizes, &edges)?;
    Ok(Instance::new(name, graph, root, quota)?)
}
