//! Least-cost paths: Dijkstra with forbidden vertices, and least-cost pairs
//! of vertex-disjoint paths from the root (Suurballe).

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::graph::{Cost, ExtCost, Instance, Prize, SparseGraph, VertexId};

/// Single-source least-cost distances and predecessors.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub source: VertexId,
    pub dist: Vec<ExtCost>,
    pub pred: Vec<Option<VertexId>>,
}

impl ShortestPaths {
    /// Vertices of the least-cost path `source -> target`, or `None` if
    /// `target` is unreachable.
    pub fn path_to(&self, target: VertexId) -> Option<Vec<VertexId>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut path = vec![target];
        let mut v = target;
        while let Some(p) = self.pred[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Dijkstra from `source` over vertices not in `forbidden`. Equal-distance
/// ties are broken towards the lowest predecessor id.
pub fn shortest_path(graph: &SparseGraph, source: VertexId, forbidden: &[VertexId]) -> ShortestPaths {
    let mut mask = vec![false; graph.n()];
    for &v in forbidden {
        mask[v] = true;
    }
    shortest_path_masked(graph, source, &mask)
}

pub(crate) fn shortest_path_masked(graph: &SparseGraph, source: VertexId, forbidden: &[bool]) -> ShortestPaths {
    debug_assert!(!forbidden[source], "source must not be forbidden");
    let n = graph.n();
    let mut dist = vec![ExtCost::Infinite; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = ExtCost::Finite(0);
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(w, e) in graph.neighbors(u) {
            if forbidden[w] || done[w] {
                continue;
            }
            let nd = d + graph.edge(e).cost;
            let better = match dist[w] {
                ExtCost::Infinite => true,
                ExtCost::Finite(cur) => nd < cur || (nd == cur && pred[w].is_some_and(|p| u < p)),
            };
            if better {
                if dist[w] != ExtCost::Finite(nd) {
                    heap.push(Reverse((nd, w)));
                }
                dist[w] = ExtCost::Finite(nd);
                pred[w] = Some(u);
            }
        }
    }
    ShortestPaths { source, dist, pred }
}

/// Least-cost pair of vertex-disjoint paths from the root to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPathPair {
    pub target: VertexId,
    pub path_a: Vec<VertexId>,
    pub path_b: Vec<VertexId>,
    pub combined_cost: Cost,
    /// Prize of the union of both paths' vertices.
    pub combined_prize: Prize,
}

impl DisjointPathPair {
    /// The cycle `path_a` followed by `path_b` reversed, without repeating
    /// the target or the root.
    pub fn to_cycle(&self) -> Vec<VertexId> {
        let mut cycle = self.path_a.clone();
        let inner = &self.path_b[1..self.path_b.len() - 1];
        cycle.extend(inner.iter().rev());
        cycle
    }
}

// Vertex-split digraph: v_in = 2v, v_out = 2v + 1.
const fn v_in(v: VertexId) -> usize {
    2 * v
}
const fn v_out(v: VertexId) -> usize {
    2 * v + 1
}

struct Arc {
    head: usize,
    cost: Cost,
}

struct SplitGraph {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl SplitGraph {
    fn build(graph: &SparseGraph, root: VertexId) -> SplitGraph {
        let nodes = 2 * graph.n();
        let mut arcs = Vec::new();
        let mut out = vec![Vec::new(); nodes];
        let mut add = |tail: usize, head: usize, cost: Cost, arcs: &mut Vec<Arc>| {
            out[tail].push(arcs.len());
            arcs.push(Arc { head, cost });
        };
        for v in 0..graph.n() {
            if v != root {
                add(v_in(v), v_out(v), 0, &mut arcs);
            }
        }
        for e in graph.edges() {
            // Nothing ever re-enters the root.
            if e.v != root {
                add(v_out(e.u), v_in(e.v), e.cost, &mut arcs);
            }
            if e.u != root {
                add(v_out(e.v), v_in(e.u), e.cost, &mut arcs);
            }
        }
        for list in &mut out {
            list.sort_by_key(|&a| arcs[a].head);
        }
        SplitGraph { arcs, out }
    }
}

/// For every vertex `t != root`, the least-cost pair of vertex-disjoint
/// root-`t` paths, or `None` when no such pair exists. Index by vertex id;
/// the root's entry is always `None`.
pub fn suurballe(graph: &SparseGraph, root: VertexId) -> Vec<Option<DisjointPathPair>> {
    let n = graph.n();
    let split = SplitGraph::build(graph, root);
    let nodes = 2 * n;
    let source = v_out(root);

    // First pass: plain Dijkstra from the source; distances become potentials.
    let (pot, pred_arc) = split_dijkstra(&split, source, nodes);
    let mut tail_of = vec![0usize; split.arcs.len()];
    for (tail, list) in split.out.iter().enumerate() {
        for &a in list {
            tail_of[a] = tail;
        }
    }

    let mut result = vec![None; n];
    let mut on_p1 = vec![false; split.arcs.len()];
    let mut p1_in: Vec<Option<usize>> = vec![None; nodes];
    for t in (0..n).filter(|&t| t != root) {
        let sink = v_in(t);
        let Some(_) = pot[sink] else { continue };
        // Mark P1.
        let mut p1 = Vec::new();
        let mut x = sink;
        while let Some(a) = pred_arc[x] {
            p1.push(a);
            on_p1[a] = true;
            p1_in[x] = Some(a);
            x = tail_of[a];
        }
        let t_split = split.out[sink].first().copied();
        let reduced = |tail: usize, a: usize| -> Option<Cost> {
            if on_p1[a] || Some(a) == t_split {
                return None;
            }
            let (pt, ph) = (pot[tail]?, pot[split.arcs[a].head]?);
            Some(split.arcs[a].cost + pt - ph)
        };
        let reverse = |x: usize| p1_in[x].map(|a| tail_of[a]);
        let (d2, pred2) = split_dijkstra_residual(&split, source, nodes, reduced, reverse);
        if d2[sink].is_some() {
            // Second path: walk back and collect its moves as (from, to).
            let mut flow: Vec<(usize, usize)> = p1.iter().map(|&a| (tail_of[a], split.arcs[a].head)).collect();
            let mut y = sink;
            while let Some(prev) = pred2[y] {
                // A reversed P1 move cancels the forward one.
                if let Some(pos) = flow.iter().position(|&(f, h)| f == y && h == prev) {
                    flow.swap_remove(pos);
                } else {
                    flow.push((prev, y));
                }
                y = prev;
            }
            result[t] = Some(decompose(graph, root, t, &flow));
        }
        for &a in &p1 {
            on_p1[a] = false;
            p1_in[split.arcs[a].head] = None;
        }
    }
    result
}

fn decompose(graph: &SparseGraph, root: VertexId, t: VertexId, flow: &[(usize, usize)]) -> DisjointPathPair {
    let mut used = vec![false; flow.len()];
    let mut follow = || {
        let mut path = vec![root];
        let mut x = v_out(root);
        while x != v_in(t) {
            let k = (0..flow.len())
                .filter(|&k| !used[k] && flow[k].0 == x)
                .min_by_key(|&k| flow[k].1)
                .expect("flow is conserved");
            used[k] = true;
            x = flow[k].1;
            if x.is_multiple_of(2) {
                path.push(x / 2);
            }
        }
        path
    };
    let p = follow();
    let q = follow();
    let (path_a, path_b) = if p <= q { (p, q) } else { (q, p) };
    let combined_cost = graph.path_cost(&path_a).unwrap() + graph.path_cost(&path_b).unwrap();
    let combined_prize = graph.prize_of(&path_a) + graph.prize_of(&path_b) - graph.prize(root) - graph.prize(t);
    DisjointPathPair { target: t, path_a, path_b, combined_cost, combined_prize }
}

type PredArcs = Vec<Option<usize>>;

fn split_dijkstra(split: &SplitGraph, source: usize, nodes: usize) -> (Vec<Option<Cost>>, PredArcs) {
    let mut dist: Vec<Option<Cost>> = vec![None; nodes];
    let mut pred: PredArcs = vec![None; nodes];
    let mut done = vec![false; nodes];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &a in &split.out[x] {
            let (h, w) = (split.arcs[a].head, split.arcs[a].cost);
            if done[h] {
                continue;
            }
            let nd = d + w;
            if dist[h].is_none_or(|cur| nd < cur) {
                dist[h] = Some(nd);
                pred[h] = Some(a);
                heap.push(Reverse((nd, h)));
            }
        }
    }
    (dist, pred)
}

/// Dijkstra over the residual graph: forward arcs with the given reduced
/// cost plus zero-reduced-cost reversals of the first path. Returns node
/// predecessors rather than arc ids.
fn split_dijkstra_residual(
    split: &SplitGraph,
    source: usize,
    nodes: usize,
    reduced: impl Fn(usize, usize) -> Option<Cost>,
    reverse: impl Fn(usize) -> Option<usize>,
) -> (Vec<Option<Cost>>, Vec<Option<usize>>) {
    let mut dist: Vec<Option<Cost>> = vec![None; nodes];
    let mut pred: Vec<Option<usize>> = vec![None; nodes];
    let mut done = vec![false; nodes];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        let forward = split.out[x].iter().filter_map(|&a| reduced(x, a).map(|w| (split.arcs[a].head, w)));
        let backward = reverse(x).map(|tail| (tail, 0));
        for (h, w) in forward.chain(backward) {
            if done[h] {
                continue;
            }
            let nd = d + w;
            if dist[h].is_none_or(|cur| nd < cur) {
                dist[h] = Some(nd);
                pred[h] = Some(x);
                heap.push(Reverse((nd, h)));
            }
        }
    }
    (dist, pred)
}

/// Largest prize collected by a least-cost disjoint pair from the root, as
/// a fraction of the total prize. Zero when no pair exists or the graph has
/// no prize.
pub fn disjoint_prize_ratio(instance: &Instance) -> f64 {
    let total = instance.graph.total_prize();
    if total == 0 {
        return 0.0;
    }
    let best = suurballe(&instance.graph, instance.root)
        .iter()
        .flatten()
        .map(|p| p.combined_prize)
        .max()
        .unwrap_or(0);
    best as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{path_graph, random_instance, square_cycle};

    #[test]
    fn dijkstra_examples() {
        let line = path_graph(&[2, 3], 0);
        let sp = shortest_path(&line.graph, 0, &[]);
        assert_eq!(sp.dist[2], ExtCost::Finite(5));
        assert_eq!(sp.path_to(2).unwrap(), vec![0, 1, 2]);
        let sp = shortest_path(&line.graph, 0, &[1]);
        assert_eq!(sp.dist[2], ExtCost::Infinite);
        assert_eq!(sp.path_to(2), None);

        let sq = square_cycle(0);
        let sp = shortest_path(&sq.graph, 0, &[]);
        assert_eq!(sp.dist[2], ExtCost::Finite(2));
        // lowest predecessor id wins the tie
        assert_eq!(sp.path_to(2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn suurballe_square_and_path() {
        let sq = square_cycle(4);
        let pairs = suurballe(&sq.graph, 0);
        let p = pairs[2].as_ref().unwrap();
        assert_eq!(p.path_a, vec![0, 1, 2]);
        assert_eq!(p.path_b, vec![0, 3, 2]);
        assert_eq!(p.combined_cost, 4);
        assert_eq!(p.combined_prize, 4);
        assert_eq!(p.to_cycle(), vec![0, 1, 2, 3]);
        // adjacent target: edge plus the long way round
        assert_eq!(pairs[1].as_ref().unwrap().combined_cost, 4);
        assert!(pairs[0].is_none());

        let line = path_graph(&[1, 1], 0);
        assert!(suurballe(&line.graph, 0).iter().all(Option::is_none));
    }

    #[test]
    fn suurballe_needs_the_crossing_fix() {
        // The trap topology: the shortest path 0-1-2-3 blocks any disjoint
        // partner, the optimum pair is 0-1-3 / 0-2-3.
        let g = SparseGraph::from_dense(
            vec![1; 4],
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (1, 3, 5), (0, 2, 5)],
        )
        .unwrap();
        let p = suurballe(&g, 0)[3].clone().unwrap();
        assert_eq!(p.combined_cost, 12);
        assert_eq!(p.path_a, vec![0, 1, 3]);
        assert_eq!(p.path_b, vec![0, 2, 3]);
    }

    #[test]
    fn disjoint_ratio_examples() {
        assert_eq!(disjoint_prize_ratio(&square_cycle(0)), 1.0);
        assert_eq!(disjoint_prize_ratio(&path_graph(&[1, 1, 1], 0)), 0.0);
        let _ = random_instance(1, 8, 2, 0.5);
    }
}
