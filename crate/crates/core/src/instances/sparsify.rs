use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CoordinateSet, GenError};
use crate::graph::VertexId;

/// Removes uniformly chosen edges from the complete graph on `coords` until
/// exactly `kappa * n` remain. A removal that would disconnect the graph is
/// rejected and the next candidate tried. Edges are returned sorted.
pub fn sparsify(coords: &CoordinateSet, kappa: usize, seed: u64) -> Result<Vec<(VertexId, VertexId)>, GenError> {
    let n = coords.len();
    if kappa == 0 {
        return Err(GenError::InvalidKappa);
    }
    if n < 2 {
        return Err(GenError::TooFewVertices { needed: 2, got: n });
    }
    let complete = n * (n - 1) / 2;
    let target = kappa * n;
    if target > complete {
        return Err(GenError::TooDense { target, complete });
    }
    let mut adj = vec![true; n * n];
    for v in 0..n {
        adj[v * n + v] = false;
    }
    let mut candidates: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);

    let mut count = complete;
    let mut seen = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (stamp, &(u, v)) in candidates.iter().enumerate() {
        if count == target {
            break;
        }
        adj[u * n + v] = false;
        adj[v * n + u] = false;
        // is v still reachable from u?
        queue.clear();
        queue.push_back(u);
        seen[u] = stamp;
        let mut reached = false;
        'bfs: while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if adj[x * n + y] && seen[y] != stamp {
                    if y == v {
                        reached = true;
                        break 'bfs;
                    }
                    seen[y] = stamp;
                    queue.push_back(y);
                }
            }
        }
        if reached {
            count -= 1;
        } else {
            adj[u * n + v] = true;
            adj[v * n + u] = true;
        }
    }
    if count != target {
        return Err(GenError::CannotReachTarget { target });
    }
    Ok((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| adj[u * n + v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SparseGraph;
    use crate::instances::random_coordinates;

    #[test]
    fn exact_edge_count_and_connected() {
        let coords = random_coordinates(10, 1);
        let edges = sparsify(&coords, 2, 5).unwrap();
        assert_eq!(edges.len(), 20);
        let dense: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        assert!(SparseGraph::from_dense(vec![0; 10], &dense).is_ok());
        assert_eq!(sparsify(&coords, 2, 5).unwrap(), edges);
        assert_ne!(sparsify(&coords, 2, 6).unwrap(), edges);
    }

    #[test]
    fn complete_target_is_unchanged() {
        let coords = random_coordinates(11, 1);
        assert_eq!(sparsify(&coords, 5, 0).unwrap().len(), 55);
        assert!(matches!(sparsify(&coords, 6, 0), Err(GenError::TooDense { .. })));
        assert_eq!(sparsify(&coords, 0, 0), Err(GenError::InvalidKappa));
    }
}
