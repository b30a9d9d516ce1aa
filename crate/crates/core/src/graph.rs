//! Sparse undirected graphs with integer costs and prizes, and the
//! [`Instance`] tuple solved by everything else in the crate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::GraphError;

/// Dense 0-based vertex index.
pub type VertexId = usize;
pub type Cost = u64;
pub type Prize = u64;

/// Path cost extended with a distinguished infinity. `Infinite` compares
/// greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCost {
    Finite(Cost),
    Infinite,
}

impl ExtCost {
    pub fn finite(self) -> Option<Cost> {
        match self {
            ExtCost::Finite(c) => Some(c),
            ExtCost::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtCost::Finite(_))
    }

    /// Doubles a finite value; infinity stays infinite.
    pub fn doubled(self) -> ExtCost {
        match self {
            ExtCost::Finite(c) => ExtCost::Finite(c * 2),
            ExtCost::Infinite => ExtCost::Infinite,
        }
    }
}

impl From<Cost> for ExtCost {
    fn from(c: Cost) -> Self {
        ExtCost::Finite(c)
    }
}

impl fmt::Display for ExtCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCost::Finite(c) => write!(f, "{c}"),
            ExtCost::Infinite => f.write_str("inf"),
        }
    }
}

/// Undirected edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: Cost,
}

impl Edge {
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Connected, simple, undirected graph. Immutable after construction.
///
/// Vertices carry an external label (preserved through file round trips and
/// preprocessing) and a prize. Adjacency lists are sorted by neighbour id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseGraph {
    labels: Vec<u64>,
    prizes: Vec<Prize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, usize)>>,
    total_cost: Cost,
    total_prize: Prize,
}

impl SparseGraph {
    /// Builds a graph from labelled vertices and edges between labels.
    /// Dense ids follow the order of `vertices`.
    pub fn new(vertices: &[(u64, Prize)], edges: &[(u64, u64, Cost)]) -> Result<Self, GraphError> {
        let mut index = BTreeMap::new();
        for (i, &(label, _)) in vertices.iter().enumerate() {
            if index.insert(label, i).is_some() {
                return Err(GraphError::DuplicateVertex(label));
            }
        }
        let mut dense = Vec::with_capacity(edges.len());
        for &(a, b, c) in edges {
            let u = *index.get(&a).ok_or(GraphError::UnknownVertex(a))?;
            let v = *index.get(&b).ok_or(GraphError::UnknownVertex(b))?;
            dense.push((u, v, c));
        }
        let labels = vertices.iter().map(|&(l, _)| l).collect();
        let prizes = vertices.iter().map(|&(_, p)| p).collect();
        Self::with_labels(labels, prizes, &dense)
    }

    /// Builds a graph on dense ids `0..prizes.len()`, labelled by index.
    pub fn from_dense(prizes: Vec<Prize>, edges: &[(VertexId, VertexId, Cost)]) -> Result<Self, GraphError> {
        let labels = (0..prizes.len() as u64).collect();
        Self::with_labels(labels, prizes, edges)
    }

    pub fn with_labels(
        labels: Vec<u64>,
        prizes: Vec<Prize>,
        edges: &[(VertexId, VertexId, Cost)],
    ) -> Result<Self, GraphError> {
        let n = prizes.len();
        assert_eq!(labels.len(), n, "one label per vertex");
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen_labels = BTreeSet::new();
        for &l in &labels {
            if !seen_labels.insert(l) {
                return Err(GraphError::DuplicateVertex(l));
            }
        }
        let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        let mut pairs = BTreeSet::new();
        let mut total_cost: Cost = 0;
        for &(a, b, cost) in edges {
            if a >= n {
                return Err(GraphError::UnknownVertex(a as u64));
            }
            if b >= n {
                return Err(GraphError::UnknownVertex(b as u64));
            }
            if a == b {
                return Err(GraphError::SelfLoop(labels[a]));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !pairs.insert((u, v)) {
                return Err(GraphError::ParallelEdge(labels[u], labels[v]));
            }
            total_cost = total_cost.checked_add(cost).ok_or(GraphError::Overflow)?;
            let id = stored.len();
            stored.push(Edge { u, v, cost });
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        let mut total_prize: Prize = 0;
        for &p in &prizes {
            total_prize = total_prize.checked_add(p).ok_or(GraphError::Overflow)?;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let graph = SparseGraph { labels, prizes, edges: stored, adj, total_cost, total_prize };
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    pub fn n(&self) -> usize {
        self.prizes.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// `(neighbour, edge id)` pairs sorted by neighbour.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn cost_between(&self, u: VertexId, v: VertexId) -> Option<Cost> {
        self.edge_between(u, v).map(|e| self.edges[e].cost)
    }

    pub fn prize(&self, v: VertexId) -> Prize {
        self.prizes[v]
    }

    pub fn prizes(&self) -> &[Prize] {
        &self.prizes
    }

    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn vertex_of_label(&self, label: u64) -> Option<VertexId> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn total_prize(&self) -> Prize {
        self.total_prize
    }

    pub fn total_cost(&self) -> Cost {
        self.total_cost
    }

    /// Sum of prizes over a vertex list. Cannot overflow: bounded by the
    /// checked total when vertices are distinct.
    pub fn prize_of(&self, vertices: &[VertexId]) -> Prize {
        vertices.iter().map(|&v| self.prizes[v]).sum()
    }

    /// Cost of the path `vertices[0] - vertices[1] - ...`, or `None` when a
    /// consecutive pair is not adjacent.
    pub fn path_cost(&self, vertices: &[VertexId]) -> Option<Cost> {
        vertices.windows(2).map(|w| self.cost_between(w[0], w[1])).sum()
    }

    /// Subgraph induced on `keep` (sorted ascending), with labels and prizes
    /// carried over. Returns `None` if the induced subgraph is disconnected.
    pub fn induced(&self, keep: &[VertexId]) -> Option<SparseGraph> {
        let mut map = vec![usize::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|e| map[e.u] != usize::MAX && map[e.v] != usize::MAX)
            .map(|e| (map[e.u], map[e.v], e.cost))
            .collect();
        let labels = keep.iter().map(|&v| self.labels[v]).collect();
        let prizes = keep.iter().map(|&v| self.prizes[v]).collect();
        SparseGraph::with_labels(labels, prizes, &edges).ok()
    }
}

/// Generation parameters recorded alongside generated instances.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InstanceMeta {
    pub base: Option<String>,
    pub kappa: Option<u32>,
    pub alpha: Option<f64>,
    pub prize_mode: Option<String>,
    pub cost_mode: Option<String>,
    pub seed: Option<u64>,
}

/// A PCTSP instance `(G, c, p, Q, root)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: SparseGraph,
    pub quota: Prize,
    pub root: VertexId,
    pub name: String,
    pub meta: Option<InstanceMeta>,
}

impl Instance {
    pub fn new(name: impl Into<String>, graph: SparseGraph, root: VertexId, quota: Prize) -> Result<Self, GraphError> {
        if root >= graph.n() {
            return Err(GraphError::RootNotInGraph(root as u64));
        }
        Ok(Instance { graph, quota, root, name: name.into(), meta: None })
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(SparseGraph::from_dense(vec![], &[]), Err(GraphError::Empty));
        assert_eq!(SparseGraph::from_dense(vec![1, 1], &[(0, 0, 1)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            SparseGraph::from_dense(vec![1, 1], &[(0, 1, 1), (1, 0, 2)]),
            Err(GraphError::ParallelEdge(0, 1))
        );
        assert_eq!(
            SparseGraph::from_dense(vec![1, 1, 1], &[(0, 1, 1)]),
            Err(GraphError::Disconnected)
        );
        assert_eq!(
            SparseGraph::new(&[(5, 1), (5, 2)], &[(5, 5, 1)]),
            Err(GraphError::DuplicateVertex(5))
        );
        assert_eq!(
            SparseGraph::from_dense(vec![u64::MAX, 1], &[(0, 1, 1)]),
            Err(GraphError::Overflow)
        );
    }

    #[test]
    fn labels_map_to_dense_ids() {
        let g = SparseGraph::new(&[(10, 3), (20, 4), (30, 5)], &[(10, 20, 1), (30, 20, 2)]).unwrap();
        assert_eq!(g.vertex_of_label(30), Some(2));
        assert_eq!(g.cost_between(2, 1), Some(2));
        assert_eq!(g.cost_between(0, 2), None);
        assert_eq!(g.total_prize(), 12);
        assert_eq!(g.edge(1), &Edge { u: 1, v: 2, cost: 2 });
    }

    #[test]
    fn ext_cost_orders_infinity_last() {
        assert!(ExtCost::Finite(u64::MAX) < ExtCost::Infinite);
        assert_eq!(ExtCost::Finite(3).doubled(), ExtCost::Finite(6));
        assert_eq!(ExtCost::Infinite.doubled(), ExtCost::Infinite);
    }
}
