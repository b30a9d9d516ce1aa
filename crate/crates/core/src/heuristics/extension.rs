//! Path extension: replace the tour sub-path `u_h .. u_{h+beta}` by an
//! outside path between the same endpoints that collects more prize,
//! choosing the swap with the smallest unitary loss (extra cost per extra
//! unit of prize).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{HeuristicError, HeuristicResult};
use crate::graph::{Cost, Instance, Prize, SparseGraph, VertexId};
use crate::tour::Tour;

/// Largest step size worth trying; longer internal paths are rarely
/// replaced.
pub const BETA_MAX: usize = 10;

/// Exact ratio `(c(X) - c(P)) / (p(X) - p(P))` with a positive denominator.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryLoss {
    num: i128,
    den: i128,
}

impl UnitaryLoss {
    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for UnitaryLoss {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for UnitaryLoss {}
impl PartialOrd for UnitaryLoss {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for UnitaryLoss {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

pub fn unitary_loss(
    extension_cost: Cost,
    internal_cost: Cost,
    extension_prize: Prize,
    internal_prize: Prize,
) -> Result<UnitaryLoss, HeuristicError> {
    if extension_prize <= internal_prize {
        return Err(HeuristicError::InvalidCandidate);
    }
    Ok(UnitaryLoss {
        num: extension_cost as i128 - internal_cost as i128,
        den: (extension_prize - internal_prize) as i128,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCandidate {
    /// 0-based position of `u_h` in the root-first tour.
    pub anchor: usize,
    pub step: usize,
    pub extension_path: Vec<VertexId>,
    pub internal_path: Vec<VertexId>,
    pub extension_cost: Cost,
    pub internal_cost: Cost,
    pub extension_prize: Prize,
    pub internal_prize: Prize,
}

impl ExtensionCandidate {
    pub fn unitary_loss(&self) -> UnitaryLoss {
        unitary_loss(self.extension_cost, self.internal_cost, self.extension_prize, self.internal_prize)
            .expect("candidates collect more prize than their internal path")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// Stop once the tour is prize-feasible, or when nothing can be added.
    A,
    /// Stop when no candidate beats the mean loss of the first iteration.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExtensionMode {
    /// One breadth-first path per anchor (fewest edges, smallest ids first).
    #[default]
    Bfs,
    /// Only single-vertex insertions between adjacent tour vertices, every
    /// such vertex a candidate.
    SingleVertex,
}

/// Fewest-edge path `from -> to` whose interior avoids `blocked` and has
/// at least one vertex.
fn bfs_detour(g: &SparseGraph, from: VertexId, to: VertexId, blocked: &[bool]) -> Option<Vec<VertexId>> {
    let mut parent = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &(w, _) in g.neighbors(from) {
        if !blocked[w] && parent[w] == usize::MAX {
            parent[w] = from;
            queue.push_back(w);
        }
    }
    while let Some(x) = queue.pop_front() {
        if g.edge_between(x, to).is_some() {
            let mut path = vec![to, x];
            let mut y = x;
            while parent[y] != from {
                y = parent[y];
                path.push(y);
            }
            path.push(from);
            path.reverse();
            return Some(path);
        }
        for &(w, _) in g.neighbors(x) {
            if !blocked[w] && parent[w] == usize::MAX {
                parent[w] = x;
                queue.push_back(w);
            }
        }
    }
    None
}

/// All admissible extension paths of step `beta` for a root-first tour.
pub fn extension_candidates(
    instance: &Instance,
    tour: &[VertexId],
    beta: usize,
    mode: ExtensionMode,
) -> Vec<ExtensionCandidate> {
    let g = &instance.graph;
    let k = tour.len();
    let mut blocked = vec![false; g.n()];
    for &v in tour {
        blocked[v] = true;
    }
    let mut out = Vec::new();
    if beta == 0 || beta >= k {
        return out;
    }
    for h in 0..k - beta {
        let internal = &tour[h..=h + beta];
        let (a, b) = (internal[0], internal[beta]);
        let internal_cost = g.path_cost(internal).expect("tour sub-path");
        let internal_prize = g.prize_of(internal);
        let paths: Vec<Vec<VertexId>> = match mode {
            ExtensionMode::Bfs => bfs_detour(g, a, b, &blocked).into_iter().collect(),
            ExtensionMode::SingleVertex => g
                .neighbors(a)
                .iter()
                .filter(|&&(w, _)| !blocked[w] && g.edge_between(w, b).is_some())
                .map(|&(w, _)| vec![a, w, b])
                .collect(),
        };
        for path in paths {
            let extension_prize = g.prize_of(&path);
            if extension_prize <= internal_prize {
                continue;
            }
            out.push(ExtensionCandidate {
                anchor: h,
                step: beta,
                extension_cost: g.path_cost(&path).expect("bfs path"),
                extension_path: path,
                internal_path: internal.to_vec(),
                internal_cost,
                extension_prize,
                internal_prize,
            });
        }
    }
    out
}

fn splice(instance: &Instance, tour: &[VertexId], cand: &ExtensionCandidate) -> Tour {
    let mut seq = Vec::with_capacity(tour.len() + cand.extension_path.len());
    seq.extend_from_slice(&tour[..cand.anchor]);
    seq.extend_from_slice(&cand.extension_path);
    seq.extend_from_slice(&tour[cand.anchor + cand.step + 1..]);
    Tour::new(&instance.graph, instance.root, &seq).expect("splice keeps a simple cycle through the root")
}

/// Path extension with step `beta` and the given termination criterion,
/// for at most `n` iterations.
pub fn path_extend(instance: &Instance, tour: &Tour, beta: usize, criterion: Criterion) -> HeuristicResult {
    extend_with(instance, tour, beta, criterion, ExtensionMode::Bfs)
}

pub fn extend_with(
    instance: &Instance,
    tour: &Tour,
    beta: usize,
    criterion: Criterion,
    mode: ExtensionMode,
) -> HeuristicResult {
    let stage = match criterion {
        Criterion::A => format!("PE-A({beta})"),
        Criterion::B => format!("PE-B({beta})"),
    };
    let mut current = tour.rooted_at(instance.root);
    let mut splices = 0;
    if criterion == Criterion::A && current.is_prize_feasible(instance.quota) {
        let mut r = HeuristicResult::from_tour(instance, current, stage);
        r.splices = 0;
        return r;
    }
    let mut threshold: Option<f64> = None;
    for _ in 0..instance.n() {
        let candidates = extension_candidates(instance, current.vertices(), beta, mode);
        if candidates.is_empty() {
            break;
        }
        let losses: Vec<UnitaryLoss> = candidates.iter().map(ExtensionCandidate::unitary_loss).collect();
        if criterion == Criterion::B && threshold.is_none() {
            threshold = Some(losses.iter().map(|l| l.as_f64()).sum::<f64>() / losses.len() as f64);
        }
        let admissible = |i: usize| match (criterion, threshold) {
            (Criterion::B, Some(mean)) => losses[i].as_f64() < mean - 1e-9 * libm::fabs(mean).max(1.0),
            _ => true,
        };
        // min loss, ties to the smallest anchor (candidates are in anchor order)
        let Some(best) = (0..candidates.len()).filter(|&i| admissible(i)).min_by(|&i, &j| losses[i].cmp(&losses[j]).then(i.cmp(&j)))
        else {
            break;
        };
        current = splice(instance, current.vertices(), &candidates[best]);
        splices += 1;
        if criterion == Criterion::A && current.is_prize_feasible(instance.quota) {
            break;
        }
    }
    let mut r = HeuristicResult::from_tour(instance, current, stage);
    r.splices = splices;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::square_cycle;

    #[test]
    fn loss_formula() {
        assert_eq!(unitary_loss(5, 3, 4, 2).unwrap().as_f64(), 1.0);
        assert_eq!(unitary_loss(2, 4, 3, 2).unwrap().as_f64(), -2.0);
        assert_eq!(unitary_loss(4, 4, 3, 1).unwrap().as_f64(), 0.0);
        assert_eq!(unitary_loss(4, 4, 3, 3), Err(HeuristicError::InvalidCandidate));
        assert!(unitary_loss(1, 0, 3, 0).unwrap() < unitary_loss(1, 0, 2, 0).unwrap());
    }

    /// Square 0-1-2-3 with a detour 1-4-2 (prize 5 at 4).
    fn square_with_detour(quota: Prize, detour: (Cost, Cost)) -> Instance {
        let g = SparseGraph::from_dense(
            vec![1, 1, 1, 1, 5],
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (1, 4, detour.0), (4, 2, detour.1)],
        )
        .unwrap();
        Instance::new("sq+", g, 0, quota).unwrap()
    }

    #[test]
    fn criterion_a_entry_check() {
        let inst = square_cycle(4);
        let t = Tour::new(&inst.graph, 0, &[0, 1, 2, 3]).unwrap();
        let r = path_extend(&inst, &t, 1, Criterion::A);
        assert_eq!(r.splices, 0);
        assert_eq!(r.tour.unwrap(), t);
    }

    #[test]
    fn extends_to_feasibility() {
        let inst = square_with_detour(9, (2, 2));
        let t = Tour::new(&inst.graph, 0, &[0, 1, 2, 3]).unwrap();
        let r = path_extend(&inst, &t, 1, Criterion::A);
        assert!(r.feasible);
        assert_eq!(r.splices, 1);
        assert_eq!(r.tour.unwrap().vertices(), &[0, 1, 4, 2, 3]);
    }

    #[test]
    fn criterion_b_single_candidate_is_not_below_its_own_mean() {
        let inst = square_with_detour(4, (2, 2));
        let t = Tour::new(&inst.graph, 0, &[0, 1, 2, 3]).unwrap();
        let cands = extension_candidates(&inst, t.vertices(), 1, ExtensionMode::Bfs);
        assert_eq!(cands.len(), 1);
        let r = path_extend(&inst, &t, 1, Criterion::B);
        assert_eq!(r.splices, 0);
        assert_eq!(r.tour.unwrap(), t);
    }

    #[test]
    fn larger_step_replaces_longer_internal_path() {
        // detour from 1 to 3 around 2 through 4, 5
        let g = SparseGraph::from_dense(
            vec![1, 1, 1, 1, 3, 3],
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (1, 4, 1), (4, 5, 1), (5, 3, 1)],
        )
        .unwrap();
        let inst = Instance::new("b2", g, 0, 9).unwrap();
        let t = Tour::new(&inst.graph, 0, &[0, 1, 2, 3]).unwrap();
        assert!(!path_extend(&inst, &t, 1, Criterion::A).feasible);
        let r = path_extend(&inst, &t, 2, Criterion::A);
        assert!(r.feasible);
        assert_eq!(r.tour.unwrap().vertices(), &[0, 1, 4, 5, 3]);
        // the root is never part of a replaced internal path
        let cands = extension_candidates(&inst, t.vertices(), 2, ExtensionMode::Bfs);
        assert!(cands.iter().all(|c| c.anchor + c.step < 4));
    }
}
