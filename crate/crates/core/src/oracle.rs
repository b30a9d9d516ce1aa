//! Exhaustive verification oracle: enumerates every simple cycle through
//! the root. Exponential; intended for graphs of at most a dozen or so
//! vertices.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{Cost, Instance, Prize, SparseGraph, VertexId};
use crate::tour::Tour;

pub const DEFAULT_LIMIT_N: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleOutcome {
    /// Minimum-cost prize-feasible tour (canonical form), if any.
    pub best: Option<Tour>,
    /// Every prize-feasible tour of minimum cost, canonical and sorted.
    pub optimal_tours: Vec<Tour>,
    pub cycles_examined: usize,
}

impl OracleOutcome {
    pub fn optimal_cost(&self) -> Option<Cost> {
        self.best.as_ref().map(Tour::cost)
    }
}

/// Calls `visit(cycle, cost, prize)` once per simple cycle through `root`.
/// Each cycle starts at the root and is reported in the direction whose
/// second vertex is smaller than its last.
pub fn for_each_cycle(graph: &SparseGraph, root: VertexId, mut visit: impl FnMut(&[VertexId], Cost, Prize)) {
    let mut on_path = vec![false; graph.n()];
    let mut path = vec![root];
    on_path[root] = true;
    extend(graph, root, &mut path, &mut on_path, 0, graph.prize(root), &mut visit);
}

fn extend(
    graph: &SparseGraph,
    root: VertexId,
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    cost: Cost,
    prize: Prize,
    visit: &mut impl FnMut(&[VertexId], Cost, Prize),
) {
    let last = *path.last().unwrap();
    for &(w, e) in graph.neighbors(last) {
        let c = graph.edge(e).cost;
        if w == root {
            if path.len() >= 3 && path[1] < last {
                visit(path, cost + c, prize);
            }
            continue;
        }
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        path.push(w);
        extend(graph, root, path, on_path, cost + c, prize + graph.prize(w), visit);
        path.pop();
        on_path[w] = false;
    }
}

/// Minimum-cost prize-feasible tour by full enumeration.
pub fn oracle_solve(instance: &Instance, limit_n: usize) -> Result<OracleOutcome, OracleError> {
    if instance.n() > limit_n {
        return Err(OracleError::TooLarge { n: instance.n(), limit: limit_n });
    }
    let mut best_cost: Option<Cost> = None;
    let mut optimal: Vec<Vec<VertexId>> = Vec::new();
    let mut cycles = 0;
    for_each_cycle(&instance.graph, instance.root, |cycle, cost, prize| {
        cycles += 1;
        if prize < instance.quota {
            return;
        }
        match best_cost {
            Some(b) if cost > b => {}
            Some(b) if cost == b => optimal.push(cycle.to_vec()),
            _ => {
                best_cost = Some(cost);
                optimal.clear();
                optimal.push(cycle.to_vec());
            }
        }
    });
    let mut optimal_tours: Vec<Tour> = optimal
        .iter()
        .map(|c| Tour::new(&instance.graph, instance.root, c).expect("enumerated cycles are tours"))
        .collect();
    optimal_tours.sort_by(|a, b| a.vertices().cmp(b.vertices()));
    Ok(OracleOutcome { best: optimal_tours.first().cloned(), optimal_tours, cycles_examined: cycles })
}
