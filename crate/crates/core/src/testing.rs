//! Small fixtures shared by unit tests.

use alloc::vec::Vec;

use crate::graph::{Instance, Prize, SparseGraph};

pub fn triangle(quota: Prize) -> Instance {
    let g = SparseGraph::from_dense(alloc::vec![1, 1, 1], &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
    Instance::new("triangle", g, 0, quota).unwrap()
}

/// Path `0 - 1 - ... - k` with the given edge costs and unit prizes, rooted at 0.
pub fn path_graph(costs: &[u64], quota: Prize) -> Instance {
    let n = costs.len() + 1;
    let edges: Vec<_> = costs.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
    let g = SparseGraph::from_dense(alloc::vec![1; n], &edges).unwrap();
    Instance::new("path", g, 0, quota).unwrap()
}

/// Unit-cost, unit-prize 4-cycle `0-1-2-3-0` rooted at 0.
pub fn square_cycle(quota: Prize) -> Instance {
    let g = SparseGraph::from_dense(alloc::vec![1; 4], &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
    Instance::new("square", g, 0, quota).unwrap()
}

pub fn random_instance(seed: u64, n: usize, kappa: usize, alpha: f64) -> Instance {
    crate::instances::random_connected_instance(seed, n, kappa, 20, 10, alpha)
}
