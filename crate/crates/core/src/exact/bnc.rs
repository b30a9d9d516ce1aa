use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::branching::{branch_select, BranchParams, PseudoCosts};
use super::cost_cover::{apply_cost_cover, precompute_cost_cover, CostCoverArray, CostCoverMode};
use super::lp::{solve_lp_keyed, Basis, LpRow, LpStatus, INTEGRALITY_TOL};
use super::model::{build_model, IlpModel};
use super::separation::{separate_sec, SecCut};
use super::{gap, tailing_off, Clock, ExactError};
use crate::graph::{Cost, Instance, VertexId};
use crate::heuristics::{sbl_pec, BETA_MAX};
use crate::preprocess::preprocess;
use crate::tour::Tour;

#[derive(Clone, Debug, PartialEq)]
pub struct BncConfig {
    pub cost_cover: CostCoverMode,
    /// Wall-clock budget in seconds, measured by the supplied [`Clock`].
    pub time_limit: Option<f64>,
    pub tau: usize,
    pub gamma: f64,
    pub branching: BranchParams,
    /// Restrict to the biconnected blocks through the root first.
    pub preprocess: bool,
    /// Step-size limit of the SBL-PEC run that seeds the upper bound; `None`
    /// starts without an incumbent.
    pub heuristic_beta_max: Option<usize>,
}

impl Default for BncConfig {
    fn default() -> Self {
        BncConfig {
            cost_cover: CostCoverMode::None,
            time_limit: None,
            tau: 5,
            gamma: 0.001,
            branching: BranchParams::default(),
            preprocess: true,
            heuristic_beta_max: Some(BETA_MAX),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    /// Time ran out with an incumbent.
    Feasible,
    Infeasible,
    /// Time ran out without an incumbent.
    Timeout,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Vertices fixed by cost cover from the initial upper bound.
    pub pre_cuts: usize,
    /// All cost-cover fixes, including `pre_cuts`.
    pub cost_cover_cuts: usize,
    pub sec_cuts: usize,
    pub nodes: usize,
    pub lp_solves: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub upper_bound: Option<Cost>,
    pub lower_bound: f64,
    pub gap: f64,
    /// In the vertex ids of the input instance.
    pub best_tour: Option<Tour>,
    pub counters: Counters,
    pub elapsed: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeOutcome {
    Infeasible,
    Pruned,
    Integral,
    Branched,
    TimedOut,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeEvent {
    pub id: usize,
    pub depth: usize,
    /// Last LP objective at the node, if any LP was solved.
    pub lp_objective: Option<f64>,
    pub cuts_added: usize,
    pub outcome: NodeOutcome,
}

/// A separated SEC, in vertex ids of the input instance, with its violation
/// at the fractional point that triggered it.
#[derive(Clone, Debug, PartialEq)]
pub struct SecEvent {
    pub node: usize,
    pub cut: SecCut,
    pub violation: f64,
    /// The LP solution that triggered the cut, over the input instance's
    /// variables (edges first, then vertices; zero outside the search graph).
    pub point: Vec<f64>,
}

pub trait SolveObserver {
    fn node(&mut self, _event: &NodeEvent) {}
    fn sec(&mut self, _event: &SecEvent) {}
}

impl SolveObserver for () {}

struct Node {
    id: usize,
    depth: usize,
    bound: f64,
    fixes: Vec<(usize, f64)>,
    /// (variable, parent value, rounded up, parent objective)
    origin: Option<(usize, f64, bool, f64)>,
    /// Parent's final LP basis, the warm start for this node.
    basis: Option<Basis>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    /// Max-heap order: smallest bound first, then oldest node.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then(other.id.cmp(&self.id))
    }
}

type Solved = (f64, Vec<f64>, Option<Basis>);

/// Cutting rounds a cut may stay slack before it leaves the LP.
const PURGE_ROUNDS: u32 = 2;
const SLACK_TOL: f64 = 1e-6;

enum Stop {
    Time,
    Failed(ExactError),
}

impl From<ExactError> for Stop {
    fn from(e: ExactError) -> Self {
        Stop::Failed(e)
    }
}

struct Search<'a> {
    work: &'a Instance,
    model: IlpModel,
    map: Vec<VertexId>,
    /// Search edge id -> input edge id.
    edge_map: Vec<usize>,
    input_vars: (usize, usize),
    config: &'a BncConfig,
    clock: &'a dyn Clock,
    observer: &'a mut dyn SolveObserver,
    cover: Option<CostCoverArray>,
    fixed: Vec<bool>,
    /// Every cut found so far -> its row in `rows`.
    pool: BTreeMap<SecCut, usize>,
    rows: Vec<LpRow>,
    /// Whether each pool row is in the LP; inactive rows come back when
    /// separation finds them violated again.
    active: Vec<bool>,
    /// Consecutive cutting rounds each active row has been slack.
    slack_rounds: Vec<u32>,
    incumbent: Option<Tour>,
    pseudo: PseudoCosts,
    counters: Counters,
}

impl Search<'_> {
    fn input_point(&self, values: &[f64]) -> Vec<f64> {
        let (m, n) = self.input_vars;
        let mut point = vec![0.0; m + n];
        for (e, &id) in self.edge_map.iter().enumerate() {
            point[id] = values[e];
        }
        let work_m = self.edge_map.len();
        for (v, &id) in self.map.iter().enumerate() {
            point[m + id] = values[work_m + v];
        }
        point
    }

    fn upper(&self) -> Option<Cost> {
        self.incumbent.as_ref().map(Tour::cost)
    }

    fn timed_out(&self) -> bool {
        self.config.time_limit.is_some_and(|limit| self.clock.elapsed_secs() >= limit)
    }

    fn dominated(&self, objective: f64) -> bool {
        self.upper().is_some_and(|cu| libm::ceil(objective - INTEGRALITY_TOL) >= cu as f64)
    }

    fn bounds(&self, fixes: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
        let (mut lo, mut hi) = self.model.default_bounds();
        for v in 0..self.model.n {
            if self.fixed[v] {
                hi[self.model.vertex_var(v)] = 0.0;
            }
        }
        for &(var, val) in fixes {
            lo[var] = val;
            hi[var] = val;
        }
        (lo, hi)
    }

    /// `None` when infeasible; (objective, values, basis) otherwise.
    fn solve(&mut self, fixes: &[(usize, f64)], warm: Option<&Basis>) -> Result<Option<Solved>, Stop> {
        if self.timed_out() {
            return Err(Stop::Time);
        }
        let (lo, hi) = self.bounds(fixes);
        let live: Vec<usize> = (0..self.rows.len()).filter(|&i| self.active[i]).collect();
        let cuts: Vec<LpRow> = live.iter().map(|&i| self.rows[i].clone()).collect();
        let problem = self.model.relaxation(&cuts, &lo, &hi);
        // basis keys: model rows by position, pool rows after them by id
        let base = problem.rows.len() - cuts.len();
        let keys: Vec<usize> = (0..base).chain(live.iter().map(|&i| base + i)).collect();
        let (lp, basis) = solve_lp_keyed(&problem, &keys, warm).map_err(ExactError::from)?;
        self.counters.lp_solves += 1;
        Ok(match lp.status {
            LpStatus::Optimal => Some((lp.objective, lp.values, basis)),
            _ => None,
        })
    }

    /// Ages the active cuts against a fractional LP point and drops those
    /// slack for [`PURGE_ROUNDS`] rounds in a row.
    fn age_cuts(&mut self, values: &[f64]) {
        for i in 0..self.rows.len() {
            if !self.active[i] {
                continue;
            }
            let row = &self.rows[i];
            if row.rhs - row.activity(values) > SLACK_TOL {
                self.slack_rounds[i] += 1;
                if self.slack_rounds[i] >= PURGE_ROUNDS {
                    self.active[i] = false;
                }
            } else {
                self.slack_rounds[i] = 0;
            }
        }
    }

    fn update_incumbent(&mut self, tour: Tour) {
        if self.upper().is_some_and(|cu| tour.cost() >= cu) {
            return;
        }
        self.incumbent = Some(tour);
        if let Some(cover) = &self.cover {
            for v in apply_cost_cover(cover, self.upper()) {
                if !self.fixed[v] {
                    self.fixed[v] = true;
                    self.counters.cost_cover_cuts += 1;
                }
            }
        }
    }

    fn assemble(&self, values: &[f64]) -> Result<Tour, ExactError> {
        let g = &self.work.graph;
        let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); g.n()];
        for (e, edge) in g.edges().iter().enumerate() {
            if values[e] > 0.5 {
                adj[edge.u].push(edge.v);
                adj[edge.v].push(edge.u);
            }
        }
        let root = self.work.root;
        let mut seq = vec![root];
        let (mut prev, mut cur) = (root, *adj[root].first().ok_or(ExactError::BrokenIntegralSolution)?);
        while cur != root {
            if seq.len() > g.n() {
                return Err(ExactError::BrokenIntegralSolution);
            }
            seq.push(cur);
            let next = adj[cur].iter().copied().find(|&w| w != prev).ok_or(ExactError::BrokenIntegralSolution)?;
            (prev, cur) = (cur, next);
        }
        let tour = Tour::new(g, root, &seq).map_err(|_| ExactError::BrokenIntegralSolution)?;
        if !tour.is_prize_feasible(self.work.quota) {
            return Err(ExactError::BrokenIntegralSolution);
        }
        Ok(tour)
    }

    /// Cutting rounds at one node; returns the children to enqueue.
    fn process(&mut self, node: &Node) -> Result<(NodeEvent, Vec<Node>), (Stop, NodeEvent)> {
        let mut event =
            NodeEvent { id: node.id, depth: node.depth, lp_objective: None, cuts_added: 0, outcome: NodeOutcome::Pruned };
        let mut history: Vec<f64> = Vec::new();
        let mut first = true;
        let mut basis = node.basis.clone();
        loop {
            let solved = match self.solve(&node.fixes, basis.as_ref()) {
                Ok(s) => s,
                Err(stop) => {
                    event.outcome = NodeOutcome::TimedOut;
                    return Err((stop, event));
                }
            };
            let Some((objective, values, last)) = solved else {
                event.outcome = NodeOutcome::Infeasible;
                return Ok((event, Vec::new()));
            };
            if last.is_some() {
                basis = last;
            }
            event.lp_objective = Some(objective);
            if first {
                first = false;
                if let Some((var, frac, up, parent)) = node.origin {
                    self.pseudo.record(var, frac, up, objective - parent);
                }
            }
            if self.dominated(objective) {
                event.outcome = NodeOutcome::Pruned;
                return Ok((event, Vec::new()));
            }
            let integral = values.iter().all(|&v| (v - libm::round(v)).abs() <= INTEGRALITY_TOL);
            // Integral rounds never stop on tailing off, so they only ever add
            // cuts; purging there could cycle.
            if !integral {
                self.age_cuts(&values);
            }
            let fresh: Vec<_> = separate_sec(&self.work.graph, &values, self.work.root)
                .into_iter()
                .filter(|c| self.pool.get(&c.cut).is_none_or(|&i| !self.active[i]))
                .collect();
            history.push(gap(self.upper().map_or(f64::INFINITY, |c| c as f64), objective));
            if !fresh.is_empty() {
                let point = self.input_point(&values);
                for v in fresh {
                    event.cuts_added += 1;
                    if let Some(&i) = self.pool.get(&v.cut) {
                        self.active[i] = true;
                        self.slack_rounds[i] = 0;
                        continue;
                    }
                    let map = &self.map;
                    self.observer.sec(&SecEvent {
                        node: node.id,
                        cut: v.cut.remapped(|x| map[x]),
                        violation: v.violation,
                        point: point.clone(),
                    });
                    self.pool.insert(v.cut.clone(), self.rows.len());
                    self.rows.push(v.cut.row(&self.work.graph));
                    self.active.push(true);
                    self.slack_rounds.push(0);
                    self.counters.sec_cuts += 1;
                }
                if integral || !tailing_off(&history, self.config.tau, self.config.gamma) {
                    continue;
                }
            } else if integral {
                let tour = self.assemble(&values).map_err(|e| (Stop::Failed(e), event.clone()))?;
                self.update_incumbent(tour);
                event.outcome = NodeOutcome::Integral;
                return Ok((event, Vec::new()));
            }
            let children = self.branch(node, objective, &values, basis.as_ref()).map_err(|stop| {
                let mut e = event.clone();
                e.outcome = NodeOutcome::TimedOut;
                (stop, e)
            })?;
            event.outcome = NodeOutcome::Branched;
            return Ok((event, children));
        }
    }

    fn branch(
        &mut self,
        node: &Node,
        objective: f64,
        values: &[f64],
        warm: Option<&Basis>,
    ) -> Result<Vec<Node>, Stop> {
        let fractional = |range: core::ops::Range<usize>| -> Vec<(usize, f64)> {
            range
                .filter(|&j| (values[j] - libm::round(values[j])).abs() > INTEGRALITY_TOL)
                .map(|j| (j, values[j]))
                .collect()
        };
        let mut candidates = fractional(0..self.model.m);
        if candidates.is_empty() {
            candidates = fractional(self.model.m..self.model.num_vars());
        }
        let params = self.config.branching;
        let mut pseudo = core::mem::replace(&mut self.pseudo, PseudoCosts::new(0));
        let chosen = branch_select(&candidates, objective, node.depth, &mut pseudo, &params, |var, up| {
            let mut fixes = node.fixes.clone();
            fixes.push((var, if up { 1.0 } else { 0.0 }));
            Ok::<_, Stop>(self.solve(&fixes, warm)?.map(|(obj, ..)| obj))
        });
        self.pseudo = pseudo;
        let var = chosen?;
        let frac = values[var];
        Ok([false, true]
            .into_iter()
            .map(|up| {
                let mut fixes = node.fixes.clone();
                fixes.push((var, if up { 1.0 } else { 0.0 }));
                Node {
                    id: 0,
                    depth: node.depth + 1,
                    bound: objective,
                    fixes,
                    origin: Some((var, frac, up, objective)),
                    basis: warm.cloned(),
                }
            })
            .collect())
    }
}

/// Solves `instance` to optimality or until the time limit. Tours in the
/// result and in observer events use the input instance's vertex ids.
pub fn branch_and_cut(
    instance: &Instance,
    config: &BncConfig,
    clock: &dyn Clock,
    observer: &mut dyn SolveObserver,
) -> Result<SolveResult, ExactError> {
    let (work, map) = match config.preprocess.then(|| preprocess(instance)) {
        Some(Ok((reduced, report))) => (reduced, report.kept_vertices),
        _ => (instance.clone(), (0..instance.n()).collect()),
    };
    let infeasible = |counters| SolveResult {
        status: SolveStatus::Infeasible,
        upper_bound: None,
        lower_bound: f64::INFINITY,
        gap: f64::INFINITY,
        best_tour: None,
        counters,
        elapsed: clock.elapsed_secs(),
    };
    let model = match build_model(&work) {
        Ok(m) => m,
        Err(ExactError::TrivialInfeasible) => return Ok(infeasible(Counters::default())),
        Err(e) => return Err(e),
    };
    let num_vars = model.num_vars();
    let edge_map = work
        .graph
        .edges()
        .iter()
        .map(|e| instance.graph.edge_between(map[e.u], map[e.v]).expect("search graph is a subgraph"))
        .collect();
    let mut search = Search {
        work: &work,
        fixed: vec![false; work.n()],
        model,
        map,
        edge_map,
        input_vars: (instance.m(), instance.n()),
        config,
        clock,
        observer,
        cover: (config.cost_cover != CostCoverMode::None).then(|| precompute_cost_cover(&work, config.cost_cover)),
        pool: BTreeMap::new(),
        rows: Vec::new(),
        active: Vec::new(),
        slack_rounds: Vec::new(),
        incumbent: None,
        pseudo: PseudoCosts::new(num_vars),
        counters: Counters::default(),
    };
    if let Some(beta) = config.heuristic_beta_max {
        if let Ok(r) = sbl_pec(&work, beta) {
            if r.feasible {
                search.update_incumbent(r.tour.expect("feasible result has a tour"));
            }
        }
    }
    search.counters.pre_cuts = search.counters.cost_cover_cuts;

    let mut heap = BinaryHeap::new();
    heap.push(Node { id: 0, depth: 0, bound: 0.0, fixes: Vec::new(), origin: None, basis: None });
    let mut next_id = 1;
    let mut timed_out = false;
    while let Some(node) = heap.pop() {
        if search.dominated(node.bound) {
            search.counters.nodes += 1;
            search.observer.node(&NodeEvent {
                id: node.id,
                depth: node.depth,
                lp_objective: None,
                cuts_added: 0,
                outcome: NodeOutcome::Pruned,
            });
            continue;
        }
        match search.process(&node) {
            Ok((event, children)) => {
                search.counters.nodes += 1;
                search.observer.node(&event);
                for mut child in children {
                    child.id = next_id;
                    next_id += 1;
                    heap.push(child);
                }
            }
            Err((Stop::Time, event)) => {
                search.observer.node(&event);
                heap.push(node);
                timed_out = true;
                break;
            }
            Err((Stop::Failed(e), _)) => return Err(e),
        }
    }

    let counters = search.counters;
    let ub = search.upper();
    let best_tour = search.incumbent.take().map(|t| {
        let seq: Vec<VertexId> = t.vertices().iter().map(|&v| search.map[v]).collect();
        Tour::new(&instance.graph, instance.root, &seq).expect("tours map back to the input graph")
    });
    let elapsed = clock.elapsed_secs();
    if !timed_out {
        return Ok(match ub {
            Some(c) => SolveResult {
                status: SolveStatus::Optimal,
                upper_bound: Some(c),
                lower_bound: c as f64,
                gap: 0.0,
                best_tour,
                counters,
                elapsed,
            },
            None => infeasible(counters),
        });
    }
    let open = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    let lower_bound = match ub {
        Some(c) => open.min(c as f64),
        None => open,
    };
    Ok(SolveResult {
        status: if ub.is_some() { SolveStatus::Feasible } else { SolveStatus::Timeout },
        upper_bound: ub,
        lower_bound,
        gap: ub.map_or(f64::INFINITY, |c| gap(c as f64, lower_bound)),
        best_tour,
        counters,
        elapsed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::NoClock;
    use crate::oracle::{oracle_solve, DEFAULT_LIMIT_N};
    use crate::testing::{path_graph, random_instance, triangle};
    use core::cell::Cell;

    fn solve(inst: &Instance, mode: CostCoverMode) -> SolveResult {
        let config = BncConfig { cost_cover: mode, ..BncConfig::default() };
        branch_and_cut(inst, &config, &NoClock, &mut ()).unwrap()
    }

    #[test]
    fn triangle_in_one_node() {
        let r = solve(&triangle(3), CostCoverMode::None);
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.upper_bound, Some(3));
        assert_eq!(r.counters.nodes, 1);
        assert_eq!(r.gap, 0.0);
    }

    #[test]
    fn infeasible_verdicts() {
        assert_eq!(solve(&triangle(4), CostCoverMode::None).status, SolveStatus::Infeasible);
        assert_eq!(solve(&path_graph(&[1, 1], 0), CostCoverMode::Dpcc).status, SolveStatus::Infeasible);
    }

    #[test]
    fn agrees_with_the_oracle() {
        for seed in 0..40 {
            let inst = random_instance(500 + seed, 6 + (seed as usize % 7), 2 + (seed as usize % 2), 0.6);
            let oracle = oracle_solve(&inst, DEFAULT_LIMIT_N).unwrap().optimal_cost();
            for mode in [CostCoverMode::None, CostCoverMode::Spcc, CostCoverMode::Dpcc] {
                let config = BncConfig { cost_cover: mode, heuristic_beta_max: None, ..BncConfig::default() };
                let r = branch_and_cut(&inst, &config, &NoClock, &mut ()).unwrap();
                assert_eq!(r.upper_bound, oracle, "seed {seed} {mode}");
                let r = solve(&inst, mode);
                assert_eq!(r.upper_bound, oracle, "seed {seed} {mode}");
                if let Some(t) = &r.best_tour {
                    assert_eq!(t.recompute(&inst.graph), Some((t.cost(), t.prize())));
                    assert!(t.is_prize_feasible(inst.quota));
                }
            }
        }
    }

    struct Recorder {
        secs: Vec<SecEvent>,
        nodes: Vec<NodeEvent>,
    }

    impl SolveObserver for Recorder {
        fn node(&mut self, e: &NodeEvent) {
            self.nodes.push(e.clone());
        }
        fn sec(&mut self, e: &SecEvent) {
            self.secs.push(e.clone());
        }
    }

    #[test]
    fn cuts_are_violated_then_satisfied_by_the_optimum() {
        for seed in 0..30 {
            let inst = random_instance(900 + seed, 11, 3, 0.5);
            let mut rec = Recorder { secs: Vec::new(), nodes: Vec::new() };
            let config = BncConfig { heuristic_beta_max: None, ..BncConfig::default() };
            let r = branch_and_cut(&inst, &config, &NoClock, &mut rec).unwrap();
            assert_eq!(rec.secs.len(), r.counters.sec_cuts);
            assert_eq!(rec.nodes.len(), r.counters.nodes);
            if let Some(t) = &r.best_tour {
                for e in &rec.secs {
                    assert!(e.violation > 1e-6);
                    assert!((e.cut.violation(&inst.graph, &e.point) - e.violation).abs() < 1e-9);
                    assert!(e.cut.tour_slack(&inst.graph, t) >= 0);
                }
            }
        }
    }

    struct Ticks(Cell<f64>);
    impl Clock for Ticks {
        fn elapsed_secs(&self) -> f64 {
            let t = self.0.get();
            self.0.set(t + 1.0);
            t
        }
    }

    #[test]
    fn time_limit_reports_bounds() {
        let inst = random_instance(3, 12, 3, 0.5);
        let config = BncConfig { time_limit: Some(2.0), ..BncConfig::default() };
        let r = branch_and_cut(&inst, &config, &Ticks(Cell::new(0.0)), &mut ()).unwrap();
        assert!(matches!(r.status, SolveStatus::Feasible | SolveStatus::Timeout | SolveStatus::Optimal));
        if let Some(ub) = r.upper_bound {
            assert!(r.lower_bound <= ub as f64);
        }
    }
}
