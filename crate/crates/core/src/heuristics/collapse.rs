//! Path collapse: keep a sub-path of the tour that just misses the quota and
//! close it again through the cheapest outside path that restores the quota.

use alloc::vec;
use alloc::vec::Vec;

use super::{HeuristicError, HeuristicResult};
use crate::graph::{Cost, Instance, VertexId};
use crate::paths::shortest_path_masked;
use crate::tour::Tour;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CollapseMode {
    /// Least-cost closing paths of any length (plus the direct edge to each
    /// neighbour, so this mode is never worse than `TwoEdge`).
    #[default]
    Full,
    /// Only closing paths `u_j, s, u_i` with exactly two edges.
    TwoEdge,
}

/// Which edge the selection score adds to the closing-path cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClosingEdge {
    /// `(s, u_i)`, the edge the collapsed tour actually uses.
    #[default]
    ToStart,
    /// `(s, u_j)`, as literally written in the original description.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CollapseOptions {
    pub mode: CollapseMode,
    pub closing: ClosingEdge,
}

pub fn path_collapse(instance: &Instance, tour: &Tour) -> Result<HeuristicResult, HeuristicError> {
    collapse_with(instance, tour, CollapseOptions::default())
}

pub fn collapse_with(
    instance: &Instance,
    tour: &Tour,
    options: CollapseOptions,
) -> Result<HeuristicResult, HeuristicError> {
    let q = instance.quota;
    if !tour.is_prize_feasible(q) {
        return Err(HeuristicError::NotPrizeFeasible);
    }
    let g = &instance.graph;
    let u = tour.vertices();
    let k = u.len();
    let mut best: Option<Tour> = None;
    let mut in_p = vec![false; g.n()];
    for i in 0..k {
        // P = (u_i, ..., u_j): longest forward walk staying below the quota
        let mut p = Vec::new();
        let mut prize = 0;
        for step in 0..k {
            let v = u[(i + step) % k];
            if prize + g.prize(v) >= q {
                break;
            }
            prize += g.prize(v);
            p.push(v);
        }
        if p.is_empty() || !p.contains(&instance.root) {
            continue;
        }
        let (ui, uj) = (p[0], p[p.len() - 1]);
        let p_cost = g.path_cost(&p).expect("tour sub-path");
        for &v in &p {
            in_p[v] = true;
        }
        in_p[uj] = false;

        let mut closings: Vec<Vec<VertexId>> = Vec::new();
        match options.mode {
            CollapseMode::Full => {
                let sp = shortest_path_masked(g, uj, &in_p);
                for &(s, _) in g.neighbors(ui) {
                    if in_p[s] || s == uj {
                        continue;
                    }
                    if let Some(path) = sp.path_to(s) {
                        closings.push(path);
                    }
                    if g.edge_between(uj, s).is_some() {
                        closings.push(vec![uj, s]);
                    }
                }
            }
            CollapseMode::TwoEdge => {
                for &(s, _) in g.neighbors(ui) {
                    if !in_p[s] && s != uj && g.edge_between(uj, s).is_some() {
                        closings.push(vec![uj, s]);
                    }
                }
            }
        }

        // (score, closing path) with the smallest score subject to the quota
        let mut chosen: Option<(Cost, Vec<VertexId>)> = None;
        for path in closings {
            let s = path[path.len() - 1];
            if prize + g.prize_of(&path[1..]) < q {
                continue;
            }
            let closing_end = match options.closing {
                ClosingEdge::ToStart => ui,
                ClosingEdge::Literal => uj,
            };
            let Some(edge) = g.cost_between(s, closing_end) else { continue };
            let score = g.path_cost(&path).expect("shortest path") + edge;
            if chosen.as_ref().is_none_or(|(c, _)| score < *c) {
                chosen = Some((score, path));
            }
        }
        for &v in &p {
            in_p[v] = false;
        }
        let Some((_, path)) = chosen else { continue };
        let mut seq = p.clone();
        seq.extend_from_slice(&path[1..]);
        let Ok(candidate) = Tour::new(g, instance.root, &seq) else { continue };
        debug_assert!(candidate.cost() >= p_cost);
        if candidate.cost() < tour.cost() && best.as_ref().is_none_or(|b| candidate.cost() < b.cost()) {
            best = Some(candidate);
        }
    }
    let out = best.unwrap_or_else(|| tour.clone()).rooted_at(instance.root);
    Ok(HeuristicResult::from_tour(instance, out, "PC"))
}
