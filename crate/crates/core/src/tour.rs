//! Tours: simple cycles through the root.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::TourError;
use crate::graph::{Cost, Instance, Prize, SparseGraph, VertexId};

/// A simple cycle `(u1, ..., uk)` with the closing edge `(uk, u1)` implicit.
/// Cost and prize are computed once at validation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tour {
    vertices: Vec<VertexId>,
    cost: Cost,
    prize: Prize,
}

impl Tour {
    /// Validates `seq` as a simple cycle of `graph` that contains `root`.
    pub fn new(graph: &SparseGraph, root: VertexId, seq: &[VertexId]) -> Result<Tour, TourError> {
        if seq.is_empty() {
            return Err(TourError::Empty);
        }
        let mut seen = vec![false; graph.n()];
        for &v in seq {
            if v >= graph.n() {
                return Err(TourError::UnknownVertex(v));
            }
            if seen[v] {
                return Err(TourError::NotSimple(v));
            }
            seen[v] = true;
        }
        if !seen.get(root).copied().unwrap_or(false) {
            return Err(TourError::RootAbsent);
        }
        if seq.len() < 3 {
            return Err(TourError::TooShort(seq.len()));
        }
        let mut cost: Cost = 0;
        for i in 0..seq.len() {
            let (a, b) = (seq[i], seq[(i + 1) % seq.len()]);
            cost += graph.cost_between(a, b).ok_or(TourError::MissingEdge(a, b))?;
        }
        let prize = graph.prize_of(seq);
        Ok(Tour { vertices: seq.to_vec(), cost, prize })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    pub fn prize(&self) -> Prize {
        self.prize
    }

    pub fn is_prize_feasible(&self, quota: Prize) -> bool {
        self.prize >= quota
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Consecutive vertex pairs including the closing pair.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// Same cycle, rotated so that `root` comes first.
    pub fn rooted_at(&self, root: VertexId) -> Tour {
        let pos = self.vertices.iter().position(|&v| v == root).expect("root on tour");
        let mut vertices = Vec::with_capacity(self.vertices.len());
        vertices.extend_from_slice(&self.vertices[pos..]);
        vertices.extend_from_slice(&self.vertices[..pos]);
        Tour { vertices, cost: self.cost, prize: self.prize }
    }

    /// Root first, then the direction whose second vertex is smaller. Two
    /// tours describe the same cycle iff their canonical forms are equal.
    pub fn canonical(&self, root: VertexId) -> Tour {
        let mut t = self.rooted_at(root);
        let k = t.vertices.len();
        if k > 2 && t.vertices[k - 1] < t.vertices[1] {
            t.vertices[1..].reverse();
        }
        t
    }

    /// Recomputes cost and prize from the graph; used to check caches.
    pub fn recompute(&self, graph: &SparseGraph) -> Option<(Cost, Prize)> {
        let mut cost = 0;
        for (a, b) in self.edge_pairs() {
            cost += graph.cost_between(a, b)?;
        }
        Some((cost, graph.prize_of(&self.vertices)))
    }
}

/// Checks `seq` against `instance` and returns the tour with its cost and
/// prize. Prize feasibility is not an error; see [`Tour::is_prize_feasible`].
pub fn validate_tour(instance: &Instance, seq: &[VertexId]) -> Result<Tour, TourError> {
    Tour::new(&instance.graph, instance.root, seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{path_graph, triangle};

    #[test]
    fn triangle_is_a_tour() {
        let inst = triangle(3);
        let t = validate_tour(&inst, &[0, 1, 2]).unwrap();
        assert_eq!((t.cost(), t.prize()), (3, 3));
        assert!(t.is_prize_feasible(3));
        assert!(!t.is_prize_feasible(4));
    }

    #[test]
    fn rejects_bad_sequences() {
        let inst = triangle(3);
        assert_eq!(validate_tour(&inst, &[0, 1, 1, 2]), Err(TourError::NotSimple(1)));
        assert_eq!(validate_tour(&inst, &[]), Err(TourError::Empty));
        assert_eq!(validate_tour(&inst, &[1, 2]), Err(TourError::RootAbsent));
        assert_eq!(validate_tour(&inst, &[0, 1]), Err(TourError::TooShort(2)));
        let line = path_graph(&[1, 1], 0);
        assert_eq!(validate_tour(&line, &[0, 1, 2]), Err(TourError::MissingEdge(2, 0)));
    }

    #[test]
    fn canonical_form_ignores_rotation_and_direction() {
        let inst = crate::testing::square_cycle(4);
        let a = validate_tour(&inst, &[2, 3, 0, 1]).unwrap();
        let b = validate_tour(&inst, &[0, 3, 2, 1]).unwrap();
        assert_eq!(a.canonical(0), b.canonical(0));
        assert_eq!(a.canonical(0).vertices(), &[0, 1, 2, 3]);
    }
}
