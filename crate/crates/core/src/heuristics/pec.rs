use alloc::string::String;
use alloc::vec::Vec;

use super::{
    bfs_initial_cycle, collapse_with, extend_with, sbl, CollapseOptions, Criterion, ExtensionMode, HeuristicError,
    HeuristicResult, StageRecord, BETA_MAX,
};
use crate::graph::Instance;
use crate::tour::Tour;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PecOptions {
    pub beta_max: usize,
    pub extension: ExtensionMode,
    pub collapse: CollapseOptions,
}

impl Default for PecOptions {
    fn default() -> Self {
        PecOptions { beta_max: BETA_MAX, extension: ExtensionMode::Bfs, collapse: CollapseOptions::default() }
    }
}

/// SBL followed by path extension and collapse.
pub fn sbl_pec(instance: &Instance, beta_max: usize) -> Result<HeuristicResult, HeuristicError> {
    sbl_pec_with(instance, PecOptions { beta_max, ..PecOptions::default() })
}

pub fn sbl_pec_with(instance: &Instance, options: PecOptions) -> Result<HeuristicResult, HeuristicError> {
    let (start, trace) = match sbl(instance) {
        Ok(r) => (r.tour.expect("sbl returns a tour on success"), r.trace),
        Err(HeuristicError::NoDisjointPair) => match bfs_initial_cycle(instance) {
            Some(t) => {
                let trace = alloc::vec![StageRecord { stage: "BFS".into(), cost: t.cost(), prize: t.prize() }];
                (t, trace)
            }
            None => return Err(HeuristicError::NoDisjointPair),
        },
        Err(e) => return Err(e),
    };
    Ok(extend_and_collapse(instance, start, trace, options))
}

/// Feasibility repair with criterion A over every step size, then
/// alternating criterion-B extension and collapse per step size, keeping the
/// cheapest tour seen.
pub(super) fn extend_and_collapse(
    instance: &Instance,
    start: Tour,
    mut trace: Vec<StageRecord>,
    options: PecOptions,
) -> HeuristicResult {
    let q = instance.quota;
    let mut tour = start;
    let mut splices = 0;
    if !tour.is_prize_feasible(q) {
        for beta in 1..=options.beta_max {
            let r = extend_with(instance, &tour, beta, Criterion::A, options.extension);
            splices += r.splices;
            tour = r.tour.expect("extension keeps a tour");
            record(&mut trace, alloc::format!("PE-A({beta})"), &tour);
            if tour.is_prize_feasible(q) {
                break;
            }
        }
        if !tour.is_prize_feasible(q) {
            return finish(instance, tour, trace, splices);
        }
    }
    let mut best = collapse(instance, &tour, options, &mut trace);
    for beta in 1..=options.beta_max {
        let r = extend_with(instance, &best, beta, Criterion::B, options.extension);
        splices += r.splices;
        let extended = r.tour.expect("extension keeps a tour");
        record(&mut trace, alloc::format!("PE-B({beta})"), &extended);
        let collapsed = collapse(instance, &extended, options, &mut trace);
        if collapsed.cost() < best.cost() {
            best = collapsed;
        }
    }
    finish(instance, best, trace, splices)
}

fn collapse(instance: &Instance, tour: &Tour, options: PecOptions, trace: &mut Vec<StageRecord>) -> Tour {
    let r = collapse_with(instance, tour, options.collapse).expect("collapse input is prize-feasible");
    let t = r.tour.expect("collapse returns a tour");
    record(trace, "PC".into(), &t);
    t
}

fn record(trace: &mut Vec<StageRecord>, stage: String, tour: &Tour) {
    trace.push(StageRecord { stage, cost: tour.cost(), prize: tour.prize() });
}

fn finish(instance: &Instance, tour: Tour, trace: Vec<StageRecord>, splices: usize) -> HeuristicResult {
    let tour = tour.rooted_at(instance.root);
    HeuristicResult { feasible: tour.is_prize_feasible(instance.quota), tour: Some(tour), trace, splices }
}
