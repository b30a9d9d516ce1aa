use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::pec::{extend_and_collapse, PecOptions};
use super::{CollapseMode, CollapseOptions, ExtensionMode, HeuristicResult, StageRecord};
use crate::graph::{Instance, VertexId};
use crate::tour::Tour;

/// First cycle through the root found by breadth-first search. Vertices are
/// labelled with the root child whose subtree holds them; scanning in BFS
/// order, the first non-tree edge that joins two branches, or that returns
/// to the root from depth two or more, closes the cycle.
pub fn bfs_initial_cycle(instance: &Instance) -> Option<Tour> {
    let g = &instance.graph;
    let root = instance.root;
    const NONE: usize = usize::MAX;
    let mut parent = vec![NONE; g.n()];
    let mut branch = vec![NONE; g.n()];
    let mut depth = vec![0usize; g.n()];
    let mut queue = VecDeque::from([root]);
    branch[root] = root;
    let up = |parent: &[VertexId], mut v: VertexId| {
        let mut path = Vec::new();
        while v != root {
            path.push(v);
            v = parent[v];
        }
        path.push(root);
        path.reverse();
        path
    };
    while let Some(x) = queue.pop_front() {
        for &(w, _) in g.neighbors(x) {
            if branch[w] == NONE {
                branch[w] = if x == root { w } else { branch[x] };
                parent[w] = x;
                depth[w] = depth[x] + 1;
                queue.push_back(w);
            } else if w == root {
                if depth[x] >= 2 {
                    return Tour::new(g, root, &up(&parent, x)).ok();
                }
            } else if x != root && branch[w] != branch[x] {
                let mut seq = up(&parent, x);
                let mut back = up(&parent, w);
                back.remove(0);
                back.reverse();
                seq.extend(back);
                return Tour::new(g, root, &seq).ok();
            }
        }
    }
    None
}

/// Breadth-first initial cycle improved with single-vertex extensions
/// (step size one) and two-edge collapses.
pub fn bfs_ec(instance: &Instance) -> HeuristicResult {
    let Some(start) = bfs_initial_cycle(instance) else {
        return HeuristicResult::empty();
    };
    let trace = vec![StageRecord { stage: "BFS".into(), cost: start.cost(), prize: start.prize() }];
    let options = PecOptions {
        beta_max: 1,
        extension: ExtensionMode::SingleVertex,
        collapse: CollapseOptions { mode: CollapseMode::TwoEdge, ..CollapseOptions::default() },
    };
    extend_and_collapse(instance, start, trace, options)
}
