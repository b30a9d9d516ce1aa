//! Variable selection: strong branching near the root, reliability
//! pseudo-costs below.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::lp::INTEGRALITY_TOL;

const SCORE_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchParams {
    /// Strong branching at depth `<= delta`.
    pub delta: usize,
    /// Observations per direction before a pseudo-cost is trusted.
    pub reliability: u32,
    /// Unreliable candidates evaluated by strong branching per node.
    pub strong_cap: usize,
}

impl Default for BranchParams {
    fn default() -> Self {
        BranchParams { delta: 1, reliability: 1, strong_cap: 64 }
    }
}

/// Per-unit objective degradations observed when rounding each variable
/// down or up.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoCosts {
    down_sum: Vec<f64>,
    down_n: Vec<u32>,
    up_sum: Vec<f64>,
    up_n: Vec<u32>,
}

impl PseudoCosts {
    pub fn new(vars: usize) -> Self {
        PseudoCosts { down_sum: vec![0.0; vars], down_n: vec![0; vars], up_sum: vec![0.0; vars], up_n: vec![0; vars] }
    }

    /// Record the objective change of a child that fixed `var` (fractional
    /// part `frac` in the parent) down or up.
    pub fn record(&mut self, var: usize, frac: f64, up: bool, degradation: f64) {
        let d = degradation.max(0.0);
        if up {
            self.up_sum[var] += d / (1.0 - frac).max(INTEGRALITY_TOL);
            self.up_n[var] += 1;
        } else {
            self.down_sum[var] += d / frac.max(INTEGRALITY_TOL);
            self.down_n[var] += 1;
        }
    }

    pub fn reliable(&self, var: usize, threshold: u32) -> bool {
        self.down_n[var] >= threshold && self.up_n[var] >= threshold
    }

    fn mean(sum: &[f64], n: &[u32], var: usize, fallback: f64) -> f64 {
        if n[var] == 0 {
            fallback
        } else {
            sum[var] / n[var] as f64
        }
    }

    /// Average per-unit degradation over all observed variables, 1 if none.
    fn global_mean(&self) -> (f64, f64) {
        let avg = |s: &[f64], n: &[u32]| {
            let (tot, cnt) = s.iter().zip(n).fold((0.0, 0u32), |(t, c), (&si, &ni)| (t + si, c + ni));
            if cnt == 0 {
                1.0
            } else {
                tot / cnt as f64
            }
        };
        (avg(&self.down_sum, &self.down_n), avg(&self.up_sum, &self.up_n))
    }

    /// Estimated (down, up) degradations for `var` at fractional value `frac`.
    pub fn estimate(&self, var: usize, frac: f64) -> (f64, f64) {
        let (gd, gu) = self.global_mean();
        (
            Self::mean(&self.down_sum, &self.down_n, var, gd) * frac,
            Self::mean(&self.up_sum, &self.up_n, var, gu) * (1.0 - frac),
        )
    }
}

/// Lexicographic branching score: children proven infeasible first, then
/// the product of objective degradations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchScore {
    pub infeasible_children: u8,
    pub product: f64,
}

impl BranchScore {
    pub fn from_children(down: Option<f64>, up: Option<f64>) -> Self {
        let infeasible_children = down.is_none() as u8 + up.is_none() as u8;
        let product = down.unwrap_or(1.0).max(SCORE_EPS) * up.unwrap_or(1.0).max(SCORE_EPS);
        BranchScore { infeasible_children, product }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.infeasible_children.cmp(&other.infeasible_children).then(self.product.total_cmp(&other.product))
    }
}

/// Child LP objective, or `None` when the child is infeasible.
pub type ChildBound = Option<f64>;

/// Chooses the branching variable among `candidates` (variable index,
/// value). `evaluate(var, up)` solves the child LP with `var` fixed to
/// zero or one. Strong-branching results feed the pseudo-cost store. Ties go
/// to the lowest variable index.
pub fn branch_select<E>(
    candidates: &[(usize, f64)],
    parent_objective: f64,
    depth: usize,
    pseudo: &mut PseudoCosts,
    params: &BranchParams,
    mut evaluate: impl FnMut(usize, bool) -> Result<ChildBound, E>,
) -> Result<usize, E> {
    assert!(!candidates.is_empty(), "branching needs a fractional variable");
    if candidates.len() == 1 {
        return Ok(candidates[0].0);
    }
    let mut strong_budget = if depth <= params.delta { usize::MAX } else { params.strong_cap };
    let mut best: Option<(usize, BranchScore)> = None;
    let mut sorted = candidates.to_vec();
    sorted.sort_by_key(|&(v, _)| v);
    for (var, value) in sorted {
        let strong = depth <= params.delta || !pseudo.reliable(var, params.reliability);
        let score = if strong && strong_budget > 0 {
            strong_budget -= 1;
            let down = evaluate(var, false)?;
            let up = evaluate(var, true)?;
            if let Some(d) = down {
                pseudo.record(var, value, false, d - parent_objective);
            }
            if let Some(u) = up {
                pseudo.record(var, value, true, u - parent_objective);
            }
            BranchScore::from_children(
                down.map(|d| (d - parent_objective).max(0.0)),
                up.map(|u| (u - parent_objective).max(0.0)),
            )
        } else {
            let (d, u) = pseudo.estimate(var, value);
            BranchScore::from_children(Some(d), Some(u))
        };
        if best.as_ref().is_none_or(|(_, b)| score.cmp(b) == Ordering::Greater) {
            best = Some((var, score));
        }
    }
    Ok(best.expect("non-empty").0)
}

/// Pseudo-cost score of `var` as [`branch_select`] computes it for reliable
/// variables.
pub fn pseudo_cost_score(pseudo: &PseudoCosts, var: usize, value: f64) -> BranchScore {
    let (d, u) = pseudo.estimate(var, value);
    BranchScore::from_children(Some(d), Some(u))
}
