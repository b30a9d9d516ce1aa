use alloc::vec;
use alloc::vec::Vec;

use super::{CoordinateSet, CostMode};
use crate::graph::{Cost, VertexId};

fn rounded_length(coords: &CoordinateSet, u: VertexId, v: VertexId) -> Cost {
    libm::ceil(coords.distance(u, v)) as Cost
}

/// Kruskal on Euclidean lengths; ties broken by edge position. Returns a
/// tree flag per edge of `topology` (which must be connected).
pub fn minimum_spanning_tree(topology: &[(VertexId, VertexId)], coords: &CoordinateSet) -> Vec<bool> {
    let n = coords.len();
    let mut order: Vec<usize> = (0..topology.len()).collect();
    order.sort_by(|&a, &b| {
        let (ua, va) = topology[a];
        let (ub, vb) = topology[b];
        coords.distance(ua, va).total_cmp(&coords.distance(ub, vb)).then(a.cmp(&b))
    });
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut in_tree = vec![false; topology.len()];
    for e in order {
        let (u, v) = topology[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            in_tree[e] = true;
        }
    }
    in_tree
}

/// Edge costs for `topology`, in the same order.
///
/// EUC: `ceil(|i - j|)`. MST: tree edges of the Euclidean minimum spanning
/// tree get `ceil(|i - j|)`, every other edge gets `ceil(|i - j|)` plus the
/// cost of the tree path between its endpoints, so only tree edges are
/// metric.
pub fn assign_costs(topology: &[(VertexId, VertexId)], coords: &CoordinateSet, mode: CostMode) -> Vec<Cost> {
    let base: Vec<Cost> = topology.iter().map(|&(u, v)| rounded_length(coords, u, v)).collect();
    if mode == CostMode::Euc {
        return base;
    }
    let n = coords.len();
    let in_tree = minimum_spanning_tree(topology, coords);
    let mut tree_adj: Vec<Vec<(VertexId, Cost)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in topology.iter().enumerate() {
        if in_tree[e] {
            tree_adj[u].push((v, base[e]));
            tree_adj[v].push((u, base[e]));
        }
    }
    // root the tree at 0: parent, depth and cost from the root
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut from_root: Vec<Cost> = vec![0; n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(u) = stack.pop() {
        for &(w, c) in &tree_adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                depth[w] = depth[u] + 1;
                from_root[w] = from_root[u] + c;
                stack.push(w);
            }
        }
    }
    let lca = |mut a: usize, mut b: usize| {
        while depth[a] > depth[b] {
            a = parent[a];
        }
        while depth[b] > depth[a] {
            b = parent[b];
        }
        while a != b {
            a = parent[a];
            b = parent[b];
        }
        a
    };
    topology
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            if in_tree[e] {
                base[e]
            } else {
                let w = lca(u, v);
                base[e] + from_root[u] + from_root[v] - 2 * from_root[w]
            }
        })
        .collect()
}
