//! Cost-cover bounds: any tour through the root and `i` costs at least
//! `A[i]`, so `i` can be dropped (`y_i = 0`) once `A[i]` exceeds the
//! incumbent cost.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph::{Cost, ExtCost, Instance, VertexId};
use crate::paths::{shortest_path, suurballe};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum CostCoverMode {
    #[default]
    None,
    /// Twice the shortest-path distance from the root.
    Spcc,
    /// Least-cost pair of vertex-disjoint root paths.
    Dpcc,
}

impl fmt::Display for CostCoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostCoverMode::None => "none",
            CostCoverMode::Spcc => "SPCC",
            CostCoverMode::Dpcc => "DPCC",
        })
    }
}

impl FromStr for CostCoverMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(CostCoverMode::None),
            "spcc" => Ok(CostCoverMode::Spcc),
            "dpcc" => Ok(CostCoverMode::Dpcc),
            _ => Err(alloc::format!("unknown cost cover {s:?}; expected none, spcc or dpcc")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostCoverArray {
    pub mode: CostCoverMode,
    pub bounds: Vec<ExtCost>,
}

impl CostCoverArray {
    /// Vertices whose bound exceeds `upper_bound` (`None` = no incumbent).
    pub fn fixed(&self, upper_bound: Option<Cost>) -> Vec<VertexId> {
        apply_cost_cover(self, upper_bound)
    }
}

pub fn precompute_cost_cover(instance: &Instance, mode: CostCoverMode) -> CostCoverArray {
    let g = &instance.graph;
    let n = g.n();
    let bounds = match mode {
        CostCoverMode::None => alloc::vec![ExtCost::Finite(0); n],
        CostCoverMode::Spcc => shortest_path(g, instance.root, &[]).dist.iter().map(|d| d.doubled()).collect(),
        CostCoverMode::Dpcc => suurballe(g, instance.root)
            .into_iter()
            .enumerate()
            .map(|(v, pair)| match pair {
                _ if v == instance.root => ExtCost::Finite(0),
                Some(p) => ExtCost::Finite(p.combined_cost),
                None => ExtCost::Infinite,
            })
            .collect(),
    };
    CostCoverArray { mode, bounds }
}

/// `{i : A[i] > C_U}`; empty when there is no upper bound.
pub fn apply_cost_cover(array: &CostCoverArray, upper_bound: Option<Cost>) -> Vec<VertexId> {
    let Some(cu) = upper_bound else { return Vec::new() };
    let cu = ExtCost::Finite(cu);
    (0..array.bounds.len()).filter(|&i| array.bounds[i] > cu).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::sbl_pec;
    use crate::oracle::{oracle_solve, DEFAULT_LIMIT_N};
    use crate::testing::{path_graph, random_instance, square_cycle};
    use alloc::vec;
    use ExtCost::{Finite, Infinite};

    #[test]
    fn square_cycle_arrays() {
        let inst = square_cycle(4);
        let sp = precompute_cost_cover(&inst, CostCoverMode::Spcc);
        assert_eq!(sp.bounds, vec![Finite(0), Finite(2), Finite(4), Finite(2)]);
        let dp = precompute_cost_cover(&inst, CostCoverMode::Dpcc);
        assert_eq!(dp.bounds, vec![Finite(0), Finite(4), Finite(4), Finite(4)]);
    }

    #[test]
    fn path_graph_pendants_are_always_fixed() {
        let inst = path_graph(&[1, 1], 0);
        let dp = precompute_cost_cover(&inst, CostCoverMode::Dpcc);
        assert_eq!(dp.bounds, vec![Finite(0), Infinite, Infinite]);
        assert_eq!(apply_cost_cover(&dp, Some(1_000)), vec![1, 2]);
        assert!(apply_cost_cover(&dp, None).is_empty());
    }

    #[test]
    fn dpcc_dominates_and_fixing_is_sound() {
        for seed in 0..60 {
            let inst = random_instance(seed, 10, 2, 0.4);
            let sp = precompute_cost_cover(&inst, CostCoverMode::Spcc);
            let dp = precompute_cost_cover(&inst, CostCoverMode::Dpcc);
            assert!(sp.bounds.iter().zip(&dp.bounds).all(|(s, d)| s <= d));
            let cu = sbl_pec(&inst, 10).ok().filter(|r| r.feasible).and_then(|r| r.cost());
            let fs = apply_cost_cover(&sp, cu);
            let fd = apply_cost_cover(&dp, cu);
            assert!(fs.iter().all(|v| fd.contains(v)));
            let oracle = oracle_solve(&inst, DEFAULT_LIMIT_N).unwrap();
            for t in &oracle.optimal_tours {
                assert!(fd.iter().all(|&v| !t.contains(v)), "seed {seed}");
            }
        }
    }
}
