//! Exact branch & cut.
//!
//! The ILP has a binary per edge and per vertex; the build-time rows are the
//! prize row, the root row and the degree rows. Sub-tour elimination rows
//! are separated by minimum cuts on the LP support, and cost-cover bounds
//! fix vertices that no tour cheaper than the incumbent can reach.

mod bnc;
pub mod branching;
pub mod cost_cover;
pub mod lp;
pub mod model;
pub mod separation;

use thiserror::Error;

pub use bnc::{branch_and_cut, BncConfig, Counters, NodeEvent, NodeOutcome, SecEvent, SolveObserver, SolveResult, SolveStatus};
pub use branching::{branch_select, BranchParams, BranchScore, PseudoCosts};
pub use cost_cover::{apply_cost_cover, precompute_cost_cover, CostCoverArray, CostCoverMode};
pub use lp::{solve_lp, LpError, LpProblem, LpRow, LpSolution, LpStatus, Sense};
pub use model::{build_model, IlpModel};
pub use separation::{separate_sec, SecCut, SupportGraph, ViolatedSec};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("total prize is below the quota")]
    TrivialInfeasible,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("integral LP solution does not form a tour through the root")]
    BrokenIntegralSolution,
}

/// Elapsed wall-clock time, supplied by the caller.
pub trait Clock {
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances; time limits never trigger.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

/// `(ub - lb) / lb`; zero when the bounds meet, infinite when only the lower
/// bound is zero.
pub fn gap(ub: f64, lb: f64) -> f64 {
    if ub == lb {
        0.0
    } else if lb <= 0.0 {
        f64::INFINITY
    } else {
        (ub - lb) / lb
    }
}

/// True when the gap improved by at most `gamma` over the last `tau`
/// cutting rounds.
pub fn tailing_off(history: &[f64], tau: usize, gamma: f64) -> bool {
    let t = history.len();
    if t < tau + 1 {
        return false;
    }
    history[t - 1 - tau] - history[t - 1] <= gamma
}
