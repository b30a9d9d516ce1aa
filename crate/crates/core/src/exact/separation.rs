//! Sub-tour elimination separation.
//!
//! A SEC for `S` (root not in `S`) and `i` in `S` reads
//! `x(E(S)) <= y(S) - y_i`, which under the degree rows is the same as
//! `x(δ(S)) >= 2 y_i`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::lp::{LpRow, Sense};
use crate::graph::{SparseGraph, VertexId};
use crate::tour::Tour;

pub const VIOLATION_TOL: f64 = 1e-6;
const SUPPORT_EPS: f64 = 1e-9;

/// Vertices with `y > 0` and edges with `x > 0`, the latter as capacities.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId, f64)>,
}

impl SupportGraph {
    /// `values` is laid out as in the ILP model: edges first, then vertices.
    pub fn from_values(graph: &SparseGraph, values: &[f64]) -> Self {
        let m = graph.m();
        let vertices = (0..graph.n()).filter(|&v| values[m + v] > SUPPORT_EPS).collect();
        let edges = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| values[e] > SUPPORT_EPS)
            .map(|(e, edge)| (edge.u, edge.v, values[e]))
            .collect();
        SupportGraph { vertices, edges }
    }

    /// Component index per vertex of the host graph (`usize::MAX` outside
    /// the support), and the number of components.
    pub fn components(&self, n: usize) -> (Vec<usize>, usize) {
        let mut adj = vec![Vec::new(); n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for &s in &self.vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SecCut {
    /// Sorted vertex set, root excluded.
    pub set: Vec<VertexId>,
    pub vertex: VertexId,
}

impl SecCut {
    fn edges_inside<'a>(&'a self, graph: &'a SparseGraph) -> impl Iterator<Item = usize> + 'a {
        self.set.iter().flat_map(move |&u| {
            graph
                .neighbors(u)
                .iter()
                .filter(move |&&(w, _)| w > u && self.set.binary_search(&w).is_ok())
                .map(|&(_, e)| e)
        })
    }

    pub fn row(&self, graph: &SparseGraph) -> LpRow {
        let m = graph.m();
        let mut coefs: Vec<(usize, f64)> = self.edges_inside(graph).map(|e| (e, 1.0)).collect();
        coefs.extend(self.set.iter().filter(|&&v| v != self.vertex).map(|&v| (m + v, -1.0)));
        LpRow { coefs, sense: Sense::Le, rhs: 0.0 }
    }

    /// `x(E(S)) - y(S) + y_i`; positive means violated.
    pub fn violation(&self, graph: &SparseGraph, values: &[f64]) -> f64 {
        let m = graph.m();
        let inside: f64 = self.edges_inside(graph).map(|e| values[e]).sum();
        let ys: f64 = self.set.iter().map(|&v| values[m + v]).sum();
        inside - ys + values[m + self.vertex]
    }

    /// `y(S) - y_i - x(E(S))` at the incidence vector of `tour`; never
    /// negative for a tour through the root.
    pub fn tour_slack(&self, graph: &SparseGraph, tour: &Tour) -> i64 {
        let mut y = vec![0i64; graph.n()];
        for &v in tour.vertices() {
            y[v] = 1;
        }
        let mut inside = 0;
        for (a, b) in tour.edge_pairs() {
            if self.set.binary_search(&a).is_ok() && self.set.binary_search(&b).is_ok() {
                inside += 1;
            }
        }
        self.set.iter().map(|&v| y[v]).sum::<i64>() - y[self.vertex] - inside
    }

    /// Same cut on a graph whose vertices were renumbered by `map`.
    pub fn remapped(&self, map: impl Fn(VertexId) -> VertexId) -> SecCut {
        let mut set: Vec<VertexId> = self.set.iter().map(|&v| map(v)).collect();
        set.sort_unstable();
        SecCut { set, vertex: map(self.vertex) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViolatedSec {
    pub cut: SecCut,
    pub violation: f64,
}

/// Dinic max-flow on a small undirected network with real capacities.
struct FlowNetwork {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<f64>,
    base: Vec<f64>,
}

impl FlowNetwork {
    fn new(n: usize, edges: &[(VertexId, VertexId, f64)]) -> Self {
        let mut net =
            FlowNetwork { head: vec![usize::MAX; n], next: Vec::new(), to: Vec::new(), cap: Vec::new(), base: Vec::new() };
        for &(u, v, c) in edges {
            net.arc(u, v, c);
            net.arc(v, u, c);
        }
        net
    }

    fn arc(&mut self, u: usize, v: usize, c: f64) {
        self.next.push(self.head[u]);
        self.head[u] = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.base.push(c);
    }

    /// Undirected edge `k` is arcs `2k` and `2k + 1`; pushing flow on one
    /// frees capacity on the other.
    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        self.cap.copy_from_slice(&self.base);
        let n = self.head.len();
        let mut flow = 0.0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let mut a = self.head[u];
                while a != usize::MAX {
                    let w = self.to[a];
                    if self.cap[a] > SUPPORT_EPS && level[w] == usize::MAX {
                        level[w] = level[u] + 1;
                        queue.push_back(w);
                    }
                    a = self.next[a];
                }
            }
            if level[t] == usize::MAX {
                return flow;
            }
            let mut iter = self.head.clone();
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, &level, &mut iter);
                if pushed <= SUPPORT_EPS {
                    break;
                }
                flow += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: f64, level: &[usize], iter: &mut [usize]) -> f64 {
        if u == t {
            return limit;
        }
        while iter[u] != usize::MAX {
            let a = iter[u];
            let w = self.to[a];
            if self.cap[a] > SUPPORT_EPS && level[w] == level[u] + 1 {
                let got = self.augment(w, t, limit.min(self.cap[a]), level, iter);
                if got > SUPPORT_EPS {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            iter[u] = self.next[a];
        }
        0.0
    }

    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut a = self.head[u];
            while a != usize::MAX {
                let w = self.to[a];
                if self.cap[a] > SUPPORT_EPS && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
                a = self.next[a];
            }
        }
        seen
    }
}

/// Minimum root-`target` cut value over `support` capacities.
pub fn min_cut_value(n: usize, support: &SupportGraph, root: VertexId, target: VertexId) -> f64 {
    FlowNetwork::new(n, &support.edges).max_flow(root, target)
}

/// Violated SECs at `values`. A disconnected support yields, for each
/// component missing the root, one cut per vertex of that component;
/// otherwise each support vertex gets the sink side of a minimum
/// root-vertex cut. Only rows violated by more than [`VIOLATION_TOL`] are
/// returned, without duplicates.
pub fn separate_sec(graph: &SparseGraph, values: &[f64], root: VertexId) -> Vec<ViolatedSec> {
    let n = graph.n();
    let support = SupportGraph::from_values(graph, values);
    let (comp, count) = support.components(n);
    let mut out: Vec<ViolatedSec> = Vec::new();
    let push = |cut: SecCut, out: &mut Vec<ViolatedSec>| {
        let violation = cut.violation(graph, values);
        if violation > VIOLATION_TOL && !out.iter().any(|o| o.cut == cut) {
            out.push(ViolatedSec { cut, violation });
        }
    };
    let root_comp = comp[root];
    if count > 1 || (root_comp == usize::MAX && count > 0) {
        for c in 0..count {
            if c == root_comp {
                continue;
            }
            let set: Vec<VertexId> = support.vertices.iter().copied().filter(|&v| comp[v] == c).collect();
            for &i in &set {
                push(SecCut { set: set.clone(), vertex: i }, &mut out);
            }
        }
        return out;
    }
    let mut net = FlowNetwork::new(n, &support.edges);
    let m = graph.m();
    for &i in &support.vertices {
        if i == root {
            continue;
        }
        let flow = net.max_flow(root, i);
        if flow >= 2.0 * values[m + i] - VIOLATION_TOL {
            continue;
        }
        let reach = net.source_side(root);
        let set: Vec<VertexId> = support.vertices.iter().copied().filter(|&v| !reach[v]).collect();
        push(SecCut { set, vertex: i }, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SparseGraph;

    /// Values vector from explicit edge and vertex values.
    fn values(g: &SparseGraph, x: &[((usize, usize), f64)], y: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; g.m() + g.n()];
        for &((a, b), val) in x {
            v[g.edge_between(a, b).unwrap()] = val;
        }
        v[g.m()..].copy_from_slice(y);
        v
    }

    fn two_triangles() -> SparseGraph {
        SparseGraph::from_dense(
            vec![1; 6],
            &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)],
        )
        .unwrap()
    }

    #[test]
    fn disconnected_support_cuts_every_vertex_of_the_other_part() {
        let g = two_triangles();
        let x: Vec<_> = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)].iter().map(|&e| (e, 1.0)).collect();
        let v = values(&g, &x, &[1.0; 6]);
        let cuts = separate_sec(&g, &v, 0);
        assert_eq!(cuts.len(), 3);
        for (k, c) in cuts.iter().enumerate() {
            assert_eq!(c.cut.set, vec![3, 4, 5]);
            assert_eq!(c.cut.vertex, 3 + k);
            assert!((c.violation - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_tour_has_no_violation() {
        let g = two_triangles();
        let x: Vec<_> = [(0, 1), (1, 2), (0, 2)].iter().map(|&e| (e, 1.0)).collect();
        let v = values(&g, &x, &[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(separate_sec(&g, &v, 0).is_empty());
    }

    /// Brute-force minimum cut over all vertex subsets.
    fn brute_min_cut(n: usize, support: &SupportGraph, root: usize, t: usize) -> f64 {
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            if mask & (1 << root) != 0 || mask & (1 << t) == 0 {
                continue;
            }
            let cut: f64 = support
                .edges
                .iter()
                .filter(|&&(u, v, _)| ((mask >> u) & 1) != ((mask >> v) & 1))
                .map(|&(_, _, c)| c)
                .sum();
            best = best.min(cut);
        }
        best
    }

    #[test]
    fn glued_loops_with_a_half_bridge() {
        // loop 0-1-2 at full weight, loop 3-4-5 reached only through a
        // half-weight bridge 2-3
        let g = two_triangles();
        let x = [((0, 1), 1.0), ((1, 2), 0.75), ((0, 2), 1.0), ((2, 3), 0.5), ((3, 4), 1.0), ((4, 5), 1.0), ((3, 5), 0.5)];
        let v = values(&g, &x, &[1.0, 0.875, 0.875, 1.0, 1.0, 0.75]);
        let support = SupportGraph::from_values(&g, &v);
        for t in 1..6 {
            let flow = min_cut_value(6, &support, 0, t);
            assert!((flow - brute_min_cut(6, &support, 0, t)).abs() < 1e-9, "t={t}");
        }
        let cuts = separate_sec(&g, &v, 0);
        assert!(!cuts.is_empty());
        for c in &cuts {
            assert_eq!(c.cut.set, vec![3, 4, 5]);
            // x(δ(S)) = 0.5 < 2 y_i
            let yi = v[g.m() + c.cut.vertex];
            assert!((c.violation - (yi - 0.25)).abs() < 1e-9);
        }
        assert_eq!(cuts.len(), 3);
    }

    #[test]
    fn flow_matches_brute_force_on_random_capacities() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = 7;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v, rng.gen_range(1..=8) as f64 / 8.0));
                    }
                }
            }
            let support = SupportGraph { vertices: (0..n).collect(), edges };
            for t in 1..n {
                let a = min_cut_value(n, &support, 0, t);
                let b = brute_min_cut(n, &support, 0, t);
                assert!((a - b).abs() < 1e-9 || (b.is_infinite() && a == 0.0));
            }
        }
    }

    #[test]
    fn tour_satisfies_cuts() {
        let g = two_triangles();
        let t = Tour::new(&g, 0, &[0, 1, 2]).unwrap();
        let cut = SecCut { set: vec![1, 2], vertex: 1 };
        assert_eq!(cut.tour_slack(&g, &t), 0);
        let cut = SecCut { set: vec![3, 4], vertex: 3 };
        assert_eq!(cut.tour_slack(&g, &t), 0);
    }
}
