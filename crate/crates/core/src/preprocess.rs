//! Biconnected-component preprocessing.
//!
//! A vertex that shares no biconnected component with the root cannot lie
//! on any tour through the root, so it is dropped together with its edges.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::PreprocessError;
use crate::graph::{Instance, SparseGraph, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct PreprocessReport {
    /// Kept vertices, as ids of the input instance, ascending.
    pub kept_vertices: Vec<VertexId>,
    pub removed_vertices: Vec<VertexId>,
    /// Input id -> id in the preprocessed instance.
    pub vertex_remap: BTreeMap<VertexId, VertexId>,
    /// p(V(H)) / p(V(G)); 1 when the input has no prize.
    pub prize_ratio: f64,
}

/// Vertex sets of the biconnected components, found with one iterative
/// depth-first search using low-link values. Bridges form two-vertex
/// components; isolated vertices belong to none.
pub fn biconnected_components(graph: &SparseGraph) -> Vec<Vec<VertexId>> {
    let n = graph.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    // (vertex, edge id used to enter it, next neighbour position)
    let mut stack: Vec<(VertexId, usize, usize)> = Vec::new();

    for start in 0..n {
        if disc[start] != usize::MAX {
            continue;
        }
        disc[start] = time;
        low[start] = time;
        time += 1;
        stack.push((start, usize::MAX, 0));
        while let Some(top) = stack.len().checked_sub(1) {
            let (u, via, pos) = stack[top];
            if let Some(&(w, e)) = graph.neighbors(u).get(pos) {
                stack[top].2 += 1;
                if e == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[u] {
                    edge_stack.push(e);
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if let Some(&(parent, _, _)) = stack.last() {
                low[parent] = low[parent].min(low[u]);
                if low[u] >= disc[parent] {
                    // parent separates the subtree of u: pop one component
                    let mut comp = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        let edge = graph.edge(e);
                        comp.push(edge.u);
                        comp.push(edge.v);
                        if e == via {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comp.dedup();
                    components.push(comp);
                }
            }
        }
    }
    components
}

/// Restricts the instance to the union of biconnected components that
/// contain the root (ignoring bridges; a root on no cycle keeps only itself). Quota, name and metadata are unchanged; the root is
/// remapped.
pub fn preprocess(instance: &Instance) -> Result<(Instance, PreprocessReport), PreprocessError> {
    let g = &instance.graph;
    if g.degree(instance.root) == 0 && g.n() > 1 {
        return Err(PreprocessError::RootIsolated);
    }
    let mut keep = vec![false; g.n()];
    keep[instance.root] = true;
    for comp in biconnected_components(g) {
        // a bridge is a two-vertex block but can never carry a cycle
        if comp.len() >= 3 && comp.binary_search(&instance.root).is_ok() {
            for v in comp {
                keep[v] = true;
            }
        }
    }
    let kept: Vec<VertexId> = (0..g.n()).filter(|&v| keep[v]).collect();
    let removed: Vec<VertexId> = (0..g.n()).filter(|&v| !keep[v]).collect();
    let remap: BTreeMap<_, _> = kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    // union of blocks through one vertex is connected
    let graph = g.induced(&kept).expect("blocks through the root are connected");
    let total = g.total_prize();
    let prize_ratio = if total == 0 { 1.0 } else { graph.total_prize() as f64 / total as f64 };
    let out = Instance {
        graph,
        quota: instance.quota,
        root: remap[&instance.root],
        name: instance.name.clone(),
        meta: instance.meta.clone(),
    };
    let report = PreprocessReport { kept_vertices: kept, removed_vertices: removed, vertex_remap: remap, prize_ratio };
    Ok((out, report))
}
