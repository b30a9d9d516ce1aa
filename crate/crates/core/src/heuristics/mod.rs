//! Polynomial-time upper-bound heuristics.
//!
//! * [`sbl`]: least-cost vertex-disjoint path pairs from the root, each
//!   closed into a tour.
//! * [`path_extend`]: raises the prize by swapping a tour sub-path for an
//!   outside path with the best cost-per-prize ratio.
//! * [`path_collapse`]: lowers the cost by re-closing a near-quota sub-path
//!   through a cheap outside path.
//! * [`sbl_pec`]: the three combined; [`bfs_ec`] is the baseline built from
//!   a breadth-first cycle and the restricted single-vertex moves.
//!
//! None of these is guaranteed to find a prize-feasible tour when one
//! exists; an infeasible outcome is reported through
//! [`HeuristicResult::feasible`].

mod bfs;
mod collapse;
mod extension;
mod pec;
mod sbl;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{Cost, Instance, Prize};
use crate::tour::Tour;

pub use bfs::{bfs_ec, bfs_initial_cycle};
pub use collapse::{collapse_with, path_collapse, ClosingEdge, CollapseMode, CollapseOptions};
pub use extension::{
    extend_with, extension_candidates, path_extend, unitary_loss, Criterion, ExtensionCandidate, ExtensionMode,
    UnitaryLoss, BETA_MAX,
};
pub use pec::{sbl_pec, sbl_pec_with, PecOptions};
pub use sbl::sbl;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("no vertex has a pair of vertex-disjoint paths from the root")]
    NoDisjointPair,
    #[error("extension path must collect more prize than the path it replaces")]
    InvalidCandidate,
    #[error("tour is not prize-feasible")]
    NotPrizeFeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: String,
    pub cost: Cost,
    pub prize: Prize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicResult {
    pub tour: Option<Tour>,
    /// `tour` is present and collects at least the quota.
    pub feasible: bool,
    pub trace: Vec<StageRecord>,
    /// Path-extension splices performed (extension stages only).
    pub splices: usize,
}

impl HeuristicResult {
    pub(crate) fn from_tour(instance: &Instance, tour: Tour, stage: impl Into<String>) -> Self {
        let feasible = tour.is_prize_feasible(instance.quota);
        let trace = alloc::vec![StageRecord { stage: stage.into(), cost: tour.cost(), prize: tour.prize() }];
        HeuristicResult { tour: Some(tour), feasible, trace, splices: 0 }
    }

    pub(crate) fn empty() -> Self {
        HeuristicResult { tour: None, feasible: false, trace: Vec::new(), splices: 0 }
    }

    pub fn cost(&self) -> Option<Cost> {
        self.tour.as_ref().map(Tour::cost)
    }
}
