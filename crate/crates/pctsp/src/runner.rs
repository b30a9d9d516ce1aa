//! Runs one algorithm on one instance and turns the outcome into a
//! [`RunRecord`]; `bench` fans this out over a directory.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use pctsp_core::exact::{
    branch_and_cut, gap, BncConfig, BranchParams, CostCoverMode, ExactError, NodeEvent, NodeOutcome, SolveObserver,
    SolveResult, SolveStatus,
};
use pctsp_core::heuristics::{bfs_ec, sbl, sbl_pec, HeuristicError, HeuristicResult, BETA_MAX};
use pctsp_core::oracle::{oracle_solve, OracleError, DEFAULT_LIMIT_N};
use pctsp_core::preprocess::preprocess;
use pctsp_core::{Instance, Tour};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::clock::StdClock;
use crate::json::{load_instance, InstanceFileError};
use crate::records::{Algorithm, RunRecord};

/// Environment variable consulted for the bench worker count.
pub const WORKERS_ENV: &str = "PCTSP_WORKERS";

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Recorded in every row. All algorithms are deterministic, so the seed
    /// only identifies the run.
    pub seed: u64,
    pub beta_max: usize,
    pub time_limit: Option<f64>,
    pub tau: usize,
    pub gamma: f64,
    pub delta: usize,
    /// Budget of the branch & cut run that supplies heuristic lower bounds;
    /// `None` leaves heuristic GAP undefined.
    pub lb_budget: Option<f64>,
    pub oracle_limit: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            beta_max: BETA_MAX,
            time_limit: Some(60.0),
            tau: 5,
            gamma: 0.001,
            delta: 1,
            lb_budget: Some(60.0),
            oracle_limit: DEFAULT_LIMIT_N,
        }
    }
}

impl RunConfig {
    pub fn bnc(&self, cost_cover: CostCoverMode) -> BncConfig {
        BncConfig {
            cost_cover,
            time_limit: self.time_limit,
            tau: self.tau,
            gamma: self.gamma,
            branching: BranchParams { delta: self.delta, ..BranchParams::default() },
            heuristic_beta_max: Some(self.beta_max),
            ..BncConfig::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Load(#[from] InstanceFileError),
    #[error("cannot read directory {path}: {source}")]
    Dir { path: String, source: std::io::Error },
    #[error("no instance files in {0}")]
    EmptyDir(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("solver failure on {instance}: {source}")]
    Solver { instance: String, source: ExactError },
    #[error("cannot write trace: {0}")]
    Trace(std::io::Error),
}

/// A record plus the tour behind it, as vertex labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Run {
    #[serde(flatten)]
    pub record: RunRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tour: Option<Vec<u64>>,
}

fn base_record(inst: &Instance, algorithm: Algorithm, seed: u64) -> RunRecord {
    let meta = inst.meta.as_ref();
    RunRecord {
        instance: inst.name.clone(),
        algorithm: algorithm.id().into(),
        status: String::new(),
        cost: None,
        prize: None,
        quota: inst.quota,
        n: inst.n(),
        m: inst.m(),
        kappa: meta.and_then(|m| m.kappa),
        alpha: meta.and_then(|m| m.alpha),
        time: 0.0,
        lower_bound: None,
        gap: None,
        pre_cuts: None,
        sec_cuts: None,
        nodes: None,
        seed,
    }
}

fn labels(inst: &Instance, tour: &Tour) -> Vec<u64> {
    tour.vertices().iter().map(|&v| inst.graph.label(v)).collect()
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Best lower bound from a budgeted DPCC branch & cut run; the optimum
/// itself when the run finishes. `None` for infeasible instances.
pub fn heuristic_lower_bound(inst: &Instance, cfg: &RunConfig) -> Result<Option<f64>, ExactError> {
    let budget = RunConfig { time_limit: cfg.lb_budget, ..cfg.clone() };
    let res = branch_and_cut(inst, &budget.bnc(CostCoverMode::Dpcc), &StdClock::start(), &mut ())?;
    Ok(match res.status {
        SolveStatus::Optimal => res.upper_bound.map(|c| c as f64),
        SolveStatus::Infeasible => None,
        SolveStatus::Feasible | SolveStatus::Timeout => finite(res.lower_bound),
    })
}

pub fn run_heuristic(inst: &Instance, algorithm: Algorithm, cfg: &RunConfig, lower_bound: Option<f64>) -> Run {
    assert!(algorithm.is_heuristic());
    let start = Instant::now();
    let result = match algorithm {
        Algorithm::Sbl => sbl(inst),
        Algorithm::BfsEc => Ok(bfs_ec(inst)),
        _ => sbl_pec(inst, cfg.beta_max),
    };
    let mut record = base_record(inst, algorithm, cfg.seed);
    record.time = start.elapsed().as_secs_f64();
    let result = match result {
        Ok(r) => r,
        Err(HeuristicError::NoDisjointPair) => HeuristicResult { tour: None, feasible: false, trace: vec![], splices: 0 },
        Err(e) => unreachable!("heuristic failed on a valid instance: {e}"),
    };
    record.lower_bound = lower_bound;
    let tour = result.tour.as_ref().map(|t| {
        record.cost = Some(t.cost());
        record.prize = Some(t.prize());
        labels(inst, t)
    });
    record.status = match (&result.tour, result.feasible) {
        (None, _) => "no-tour",
        (Some(_), false) => "infeasible_heuristic",
        (Some(t), true) => {
            record.gap = lower_bound.and_then(|lb| finite(gap(t.cost() as f64, lb)));
            "feasible"
        }
    }
    .into();
    Run { record, tour }
}

pub fn solve_record(inst: &Instance, algorithm: Algorithm, cfg: &RunConfig, res: &SolveResult) -> Run {
    let mut record = base_record(inst, algorithm, cfg.seed);
    record.status = match res.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Feasible | SolveStatus::Timeout => "timeout",
    }
    .into();
    record.time = res.elapsed;
    record.cost = res.upper_bound;
    record.prize = res.best_tour.as_ref().map(Tour::prize);
    record.lower_bound = finite(res.lower_bound);
    record.gap = if res.status == SolveStatus::Optimal { Some(0.0) } else { finite(res.gap) };
    record.pre_cuts = Some(res.counters.pre_cuts);
    record.sec_cuts = Some(res.counters.sec_cuts);
    record.nodes = Some(res.counters.nodes);
    Run { record, tour: res.best_tour.as_ref().map(|t| labels(inst, t)) }
}

pub fn cost_cover_of(algorithm: Algorithm) -> Option<CostCoverMode> {
    match algorithm {
        Algorithm::BcNone => Some(CostCoverMode::None),
        Algorithm::BcSpcc => Some(CostCoverMode::Spcc),
        Algorithm::BcDpcc => Some(CostCoverMode::Dpcc),
        _ => None,
    }
}

pub fn algorithm_of(mode: CostCoverMode) -> Algorithm {
    match mode {
        CostCoverMode::None => Algorithm::BcNone,
        CostCoverMode::Spcc => Algorithm::BcSpcc,
        CostCoverMode::Dpcc => Algorithm::BcDpcc,
    }
}

pub fn run_solver(
    inst: &Instance,
    mode: CostCoverMode,
    cfg: &RunConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Run, ExactError> {
    let res = branch_and_cut(inst, &cfg.bnc(mode), &StdClock::start(), observer)?;
    Ok(solve_record(inst, algorithm_of(mode), cfg, &res))
}

/// Exhaustive search on the preprocessed instance (the size limit applies
/// after preprocessing).
pub fn run_oracle(inst: &Instance, cfg: &RunConfig) -> Result<Run, OracleError> {
    let start = Instant::now();
    let mut record = base_record(inst, Algorithm::Oracle, cfg.seed);
    let mut tour = None;
    // only an isolated root fails preprocessing, and it admits no tour
    if let Ok((work, report)) = preprocess(inst) {
        let outcome = oracle_solve(&work, cfg.oracle_limit)?;
        if let Some(best) = outcome.best {
            record.cost = Some(best.cost());
            record.prize = Some(best.prize());
            record.lower_bound = Some(best.cost() as f64);
            record.gap = Some(0.0);
            tour = Some(best.vertices().iter().map(|&v| inst.graph.label(report.kept_vertices[v])).collect());
        }
    }
    record.status = if tour.is_some() { "optimal" } else { "infeasible" }.into();
    record.time = start.elapsed().as_secs_f64();
    Ok(Run { record, tour })
}

/// Streams one JSON object per search node.
pub struct JsonLinesTrace<W: Write> {
    out: W,
    pub error: Option<std::io::Error>,
}

impl<W: Write> JsonLinesTrace<W> {
    pub fn new(out: W) -> Self {
        JsonLinesTrace { out, error: None }
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        match self.error.take() {
            Some(e) => Err(e),
            None => self.out.flush(),
        }
    }
}

#[derive(Serialize)]
struct NodeLine {
    node: usize,
    depth: usize,
    lp_objective: Option<f64>,
    cuts_added: usize,
    outcome: &'static str,
}

impl<W: Write> SolveObserver for JsonLinesTrace<W> {
    fn node(&mut self, e: &NodeEvent) {
        if self.error.is_some() {
            return;
        }
        let line = NodeLine {
            node: e.id,
            depth: e.depth,
            lp_objective: e.lp_objective,
            cuts_added: e.cuts_added,
            outcome: match e.outcome {
                NodeOutcome::Infeasible => "infeasible",
                NodeOutcome::Pruned => "pruned",
                NodeOutcome::Integral => "integral",
                NodeOutcome::Branched => "branched",
                NodeOutcome::TimedOut => "timeout",
            },
        };
        let text = serde_json::to_string(&line).expect("plain record");
        if let Err(e) = writeln!(self.out, "{text}") {
            self.error = Some(e);
        }
    }
}

/// Runs every requested algorithm on one instance.
pub fn run_all(inst: &Instance, algorithms: &[Algorithm], cfg: &RunConfig) -> Result<Vec<RunRecord>, RunError> {
    let solver_err = |source| RunError::Solver { instance: inst.name.clone(), source };
    let lower_bound = if algorithms.iter().any(|a| a.is_heuristic()) && cfg.lb_budget.is_some() {
        heuristic_lower_bound(inst, cfg).map_err(solver_err)?
    } else {
        None
    };
    let mut out = Vec::with_capacity(algorithms.len());
    for &alg in algorithms {
        let run = if alg.is_heuristic() {
            run_heuristic(inst, alg, cfg, lower_bound)
        } else if let Some(mode) = cost_cover_of(alg) {
            run_solver(inst, mode, cfg, &mut ()).map_err(solver_err)?
        } else {
            match run_oracle(inst, cfg) {
                Ok(run) => run,
                Err(OracleError::TooLarge { .. }) => {
                    let mut record = base_record(inst, alg, cfg.seed);
                    record.status = "too-large".into();
                    Run { record, tour: None }
                }
            }
        };
        out.push(run.record);
    }
    Ok(out)
}

/// Instance files (`*.json`) of a directory, sorted by path.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let dir_err = |source| RunError::Dir { path: dir.display().to_string(), source };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(dir_err)? {
        let path = entry.map_err(dir_err)?.path();
        if path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(RunError::EmptyDir(dir.display().to_string()));
    }
    Ok(files)
}

/// Worker count: explicit flag, else [`WORKERS_ENV`], else all cores.
pub fn worker_count(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(WORKERS_ENV).ok()?.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Loads every instance first (any load failure aborts), then runs the
/// instances in parallel. Rows come back in file order, algorithms in the
/// requested order.
pub fn bench(
    dir: &Path,
    algorithms: &[Algorithm],
    cfg: &RunConfig,
    workers: usize,
) -> Result<Vec<RunRecord>, RunError> {
    let instances =
        instance_files(dir)?.iter().map(|p| load_instance(p)).collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    let rows: Vec<Vec<RunRecord>> =
        pool.install(|| instances.par_iter().map(|inst| run_all(inst, algorithms, cfg)).collect::<Result<_, _>>())?;
    Ok(rows.into_iter().flatten().collect())
}
