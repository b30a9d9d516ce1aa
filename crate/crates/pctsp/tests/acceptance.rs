//! End-to-end acceptance suite. Run with
//! `cargo test -p pctsp --test acceptance` (add `--release` for speed).
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
//! Every criterion also writes a transcript of its per-instance results;
//! criterion 11 reruns 1-8 and byte-compares those transcripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use pctsp_core::exact::{
    branch_and_cut, gap, precompute_cost_cover, tailing_off, BncConfig, CostCoverMode, NoClock, SecEvent,
    SolveObserver, SolveStatus,
};
use pctsp_core::heuristics::{bfs_ec, sbl_pec, BETA_MAX};
use pctsp_core::instances::{
    gen_prize, generate, random_connected_instance, random_coordinates, CoordinateSet, CostMode, GenerationSpec,
    PrizeMode,
};
use pctsp_core::metric::{count_metric_edges, metric_surplus};
use pctsp_core::oracle::{for_each_cycle, oracle_solve, OracleOutcome};
use pctsp_core::paths::suurballe;
use pctsp_core::preprocess::preprocess;
use pctsp_core::{Cost, Instance, Tour};

/// Criterion 1 wall-clock budget.
const ORACLE_SUITE_SECONDS: f64 = 600.0;
/// Criterion 9 violation margin.
const SEC_MARGIN: f64 = 1e-6;
/// Criterion 7: share of both-feasible instances where SBL-PEC costs no
/// more than BFS-EC.
const PEC_COST_SHARE: f64 = 0.90;
const MODES: [CostCoverMode; 3] = [CostCoverMode::None, CostCoverMode::Spcc, CostCoverMode::Dpcc];

struct Outcome {
    pass: bool,
    summary: String,
    transcript: String,
}

fn line(transcript: &mut String, args: std::fmt::Arguments<'_>) {
    transcript.write_fmt(args).unwrap();
    transcript.push('\n');
}

macro_rules! log {
    ($t:expr, $($arg:tt)*) => { line(&mut $t, format_args!($($arg)*)) };
}

fn oracle(inst: &Instance) -> OracleOutcome {
    oracle_solve(inst, 14).expect("suite instances are small")
}

fn cost_str(c: Option<Cost>) -> String {
    c.map_or_else(|| "infeasible".into(), |c| c.to_string())
}

/// The oracle-equivalence suite: n in [6,12], kappa in {2,3}, prizes <= 10,
/// alpha in {0.3,0.6}.
fn oracle_suite() -> Vec<Instance> {
    (0..200u64)
        .map(|i| {
            let n = 6 + (i % 7) as usize;
            let kappa = 2 + ((i / 7) % 2) as usize;
            let alpha = [0.3, 0.6][((i / 14) % 2) as usize];
            random_connected_instance(10_000 + i, n, kappa, 30, 10, alpha)
        })
        .collect()
}

#[derive(Default)]
struct Recorder {
    secs: Vec<SecEvent>,
}

impl SolveObserver for Recorder {
    fn sec(&mut self, e: &SecEvent) {
        self.secs.push(e.clone());
    }
}

/// What criterion 9 needs from one branch & cut run.
struct SecLog {
    instance: usize,
    mode: CostCoverMode,
    events: Vec<SecEvent>,
    final_tour: Option<Tour>,
}

fn criterion_1(suite: &[Instance], oracles: &[OracleOutcome]) -> (Outcome, Vec<SecLog>) {
    let start = Instant::now();
    let mut t = String::new();
    let mut agree = 0;
    let mut logs = Vec::new();
    for (i, (inst, o)) in suite.iter().zip(oracles).enumerate() {
        let expected = o.optimal_cost();
        let mut row = format!("{i} n={} m={} Q={} oracle={}", inst.n(), inst.m(), inst.quota, cost_str(expected));
        for mode in MODES {
            let mut rec = Recorder::default();
            let config = BncConfig { cost_cover: mode, ..BncConfig::default() };
            let res = branch_and_cut(inst, &config, &NoClock, &mut rec);
            let ok = match &res {
                Ok(r) => match r.status {
                    SolveStatus::Optimal => r.upper_bound == expected && expected.is_some(),
                    SolveStatus::Infeasible => expected.is_none(),
                    _ => false,
                },
                Err(_) => false,
            };
            agree += usize::from(ok);
            match res {
                Ok(r) => {
                    let _ = write!(
                        row,
                        " {mode}={}/{} nodes={} secs={}",
                        r.status,
                        cost_str(r.upper_bound),
                        r.counters.nodes,
                        r.counters.sec_cuts
                    );
                    logs.push(SecLog { instance: i, mode, events: rec.secs, final_tour: r.best_tour });
                }
                Err(e) => {
                    let _ = write!(row, " {mode}=error({e})");
                }
            }
        }
        log!(t, "{row}");
    }
    let secs = start.elapsed().as_secs_f64();
    let runs = suite.len() * MODES.len();
    let pass = agree == runs && secs < ORACLE_SUITE_SECONDS;
    let summary = format!("oracle equivalence: {agree}/{runs} solver runs match the oracle, {secs:.1}s (limit {ORACLE_SUITE_SECONDS}s)");
    (Outcome { pass, summary, transcript: t }, logs)
}

fn criterion_2(suite: &[Instance], oracles: &[OracleOutcome]) -> Outcome {
    let mut t = String::new();
    let (mut checked, mut subset_violations, mut soundness_violations, mut strict) = (0, 0, 0, 0);
    for (i, (inst, o)) in suite.iter().zip(oracles).enumerate() {
        let h = sbl_pec(inst, BETA_MAX).ok().filter(|r| r.feasible);
        let Some(ub) = h.and_then(|r| r.cost()) else {
            log!(t, "{i} no heuristic upper bound");
            continue;
        };
        checked += 1;
        let sp = precompute_cost_cover(inst, CostCoverMode::Spcc).fixed(Some(ub));
        let dp = precompute_cost_cover(inst, CostCoverMode::Dpcc).fixed(Some(ub));
        let subset = sp.iter().all(|v| dp.contains(v));
        let sound = o.optimal_tours.iter().all(|tour| dp.iter().chain(&sp).all(|&v| !tour.contains(v)));
        subset_violations += usize::from(!subset);
        soundness_violations += usize::from(!sound);
        strict += usize::from(dp.len() > sp.len());
        log!(t, "{i} C_U={ub} spcc={sp:?} dpcc={dp:?} subset={subset} sound={sound}");
    }
    Outcome {
        pass: subset_violations == 0 && soundness_violations == 0 && checked > 0,
        summary: format!(
            "DPCC dominance: {checked} instances with C_U, {subset_violations} subset violations, {soundness_violations} fixed vertices on optimal tours, DPCC strictly larger on {strict}"
        ),
        transcript: t,
    }
}

fn criterion_3() -> Outcome {
    let mut t = String::new();
    let (mut pairs, mut mismatches, mut seed) = (0usize, 0usize, 0u64);
    while pairs < 500 || seed < 100 {
        let n = 4 + (seed % 7) as usize;
        let inst = random_connected_instance(20_000 + seed, n, 1 + (seed % 3) as usize, 25, 5, 0.5);
        seed += 1;
        let mut through: Vec<Option<Cost>> = vec![None; n];
        for_each_cycle(&inst.graph, inst.root, |cycle, cost, _| {
            for &v in cycle {
                through[v] = Some(through[v].map_or(cost, |c| c.min(cost)));
            }
        });
        let pairs_found = suurballe(&inst.graph, inst.root);
        for v in (0..n).filter(|&v| v != inst.root) {
            let s = pairs_found[v].as_ref().map(|p| p.combined_cost);
            if through[v].is_some() {
                pairs += 1;
            }
            if s != through[v] {
                mismatches += 1;
                log!(t, "seed {} t={v}: suurballe {:?} oracle {:?}", 20_000 + seed - 1, s, through[v]);
            }
        }
    }
    log!(t, "{pairs} pairs over {seed} instances");
    Outcome {
        pass: mismatches == 0 && pairs >= 500,
        summary: format!("disjoint-pair lemma: {pairs} (instance, t) pairs, {mismatches} mismatches"),
        transcript: t,
    }
}

fn criterion_4() -> Outcome {
    let mut t = String::new();
    let mut violations = 0;
    for i in 0..500u64 {
        let n = 3 + (i % 38) as usize;
        let kappa = 1 + (i % 5) as usize;
        let inst = random_connected_instance(30_000 + i, n, kappa, [5, 100, 10_000][(i % 3) as usize], 1, 0.5);
        let count = count_metric_edges(&inst.graph);
        if count < n - 1 {
            violations += 1;
        }
        log!(t, "{i} n={n} m={} metric={count}", inst.m());
    }
    Outcome {
        pass: violations == 0,
        summary: format!("metric-edge lemma: 500 graphs, {violations} with fewer than n-1 metric edges"),
        transcript: t,
    }
}

fn spec(name: &str, kappa: usize, prize: PrizeMode, cost: CostMode, alpha: f64, seed: u64) -> GenerationSpec {
    GenerationSpec {
        name: name.into(),
        base: "random".into(),
        kappa,
        prize_mode: prize,
        cost_mode: cost,
        alpha,
        seed,
    }
}

/// Triangles (i, j, k) with c(i,k) > c(i,j) + c(j,k) on a complete graph.
fn violating_triangles(inst: &Instance) -> usize {
    let g = &inst.graph;
    let n = g.n();
    let c = |u, v| g.cost_between(u, v).expect("complete graph");
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            for k in i + 1..n {
                if j != i && j != k && c(i, k) > c(i, j) + c(j, k) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn criterion_5() -> Outcome {
    let mut t = String::new();
    let mut mst_fail = 0;
    for i in 0..50u64 {
        let n = 20 + (i % 5) as usize * 10;
        let kappa = 2 + (i % 4) as usize;
        let inst = generate(&random_coordinates(n, 40_000 + i), &spec("mst", kappa, PrizeMode::Mod, CostMode::Mst, 0.5, i))
            .unwrap();
        let count = count_metric_edges(&inst.graph);
        let zeta = metric_surplus(&inst.graph);
        if count != n - 1 || zeta != 0.0 {
            mst_fail += 1;
        }
        log!(t, "mst {i} n={n} m={} metric={count} zeta={zeta}", inst.m());
    }
    let (mut euc_fail, mut regenerated) = (0, 0);
    for i in 0..20u64 {
        // odd n with kappa = (n-1)/2 keeps every edge
        let n = 5 + 2 * (i % 8) as usize;
        let mut attempt = 0;
        loop {
            let seed = 50_000 + 100 * i + attempt;
            let inst =
                generate(&random_coordinates(n, seed), &spec("euc", (n - 1) / 2, PrizeMode::One, CostMode::Euc, 0.5, seed))
                    .unwrap();
            assert_eq!(inst.m(), n * (n - 1) / 2);
            let bad = violating_triangles(&inst);
            let zeta = metric_surplus(&inst.graph);
            log!(t, "euc {i} attempt {attempt} n={n} violating_triangles={bad} zeta={zeta}");
            if bad == 0 {
                euc_fail += usize::from(zeta != 1.0);
                break;
            }
            regenerated += 1;
            attempt += 1;
            if attempt == 5 {
                euc_fail += 1;
                break;
            }
        }
    }
    Outcome {
        pass: mst_fail == 0 && euc_fail == 0,
        summary: format!(
            "cost signatures: {mst_fail}/50 MST instances off zeta=0, {euc_fail}/20 complete EUC instances off zeta=1 ({regenerated} regenerated)"
        ),
        transcript: t,
    }
}

fn criterion_6() -> Outcome {
    let mut t = String::new();
    let (mut changed, mut not_idempotent) = (0, 0);
    for i in 0..200u64 {
        let n = 6 + (i % 7) as usize;
        // kappa 1 leaves long pendant paths and bridges to strip
        let kappa = 1 + (i % 3) as usize;
        let inst = random_connected_instance(60_000 + i, n, kappa, 30, 10, [0.2, 0.5, 0.8][(i % 3) as usize]);
        let before = oracle(&inst).optimal_cost();
        let (once, report) = preprocess(&inst).unwrap();
        let after = oracle(&once).optimal_cost();
        let (twice, _) = preprocess(&once).unwrap();
        let idempotent = twice.graph == once.graph && twice.root == once.root && twice.quota == once.quota;
        changed += usize::from(before != after);
        not_idempotent += usize::from(!idempotent);
        log!(
            t,
            "{i} n={n} kept={} before={} after={} idempotent={idempotent}",
            report.kept_vertices.len(),
            cost_str(before),
            cost_str(after)
        );
    }
    Outcome {
        pass: changed == 0 && not_idempotent == 0,
        summary: format!("preprocessing safety: 200 instances, {changed} optimum changes, {not_idempotent} non-idempotent"),
        transcript: t,
    }
}

/// The generated desk suite for criteria 7 and 8, grouped by kappa.
fn desk_suite() -> Vec<Instance> {
    (0..300u64)
        .map(|i| {
            let kappa = [2, 3, 4, 5][(i % 4) as usize];
            let n = [20, 30, 40][((i / 4) % 3) as usize];
            let prize = [PrizeMode::One, PrizeMode::Mod, PrizeMode::Dist][((i / 12) % 3) as usize];
            let cost = [CostMode::Mst, CostMode::Euc][((i / 36) % 2) as usize];
            let alpha = [0.2, 0.5, 0.8][((i / 72) % 3) as usize];
            let coords = random_coordinates(n, 70_000 + i);
            generate(&coords, &spec(&format!("desk{i}"), kappa, prize, cost, alpha, 70_000 + i)).unwrap()
        })
        .collect()
}

fn kappa_of(inst: &Instance) -> u32 {
    inst.meta.as_ref().and_then(|m| m.kappa).expect("generated instances carry kappa")
}

fn criterion_7(suite: &[Instance]) -> Outcome {
    let mut t = String::new();
    let mut feas: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    let (mut both, mut pec_no_worse) = (0, 0);
    for inst in suite {
        let ec = bfs_ec(inst);
        let pec = sbl_pec(inst, BETA_MAX).unwrap_or_else(|_| ec.clone());
        let entry = feas.entry(kappa_of(inst)).or_default();
        entry.0 += usize::from(ec.feasible);
        entry.1 += usize::from(pec.feasible);
        if ec.feasible && pec.feasible {
            both += 1;
            pec_no_worse += usize::from(pec.cost() <= ec.cost());
        }
        let show = |r: &pctsp_core::heuristics::HeuristicResult| match (r.feasible, r.cost()) {
            (true, Some(c)) => c.to_string(),
            _ => "-".into(),
        };
        log!(t, "{} kappa={} BFS-EC={} SBL-PEC={}", inst.name, kappa_of(inst), show(&ec), show(&pec));
    }
    let mut groups_ok = true;
    let mut parts = Vec::new();
    for (k, (ec, pec)) in &feas {
        groups_ok &= pec >= ec;
        parts.push(format!("k{k}: {pec} vs {ec}"));
        log!(t, "group kappa={k} FEAS BFS-EC={ec} SBL-PEC={pec}");
    }
    let share = pec_no_worse as f64 / both.max(1) as f64;
    Outcome {
        pass: groups_ok && both > 0 && share >= PEC_COST_SHARE,
        summary: format!(
            "heuristic ordering: FEAS SBL-PEC vs BFS-EC [{}]; SBL-PEC no costlier on {pec_no_worse}/{both} = {:.1}% (need {:.0}%)",
            parts.join(", "),
            100.0 * share,
            100.0 * PEC_COST_SHARE
        ),
        transcript: t,
    }
}

fn criterion_8(suite: &[Instance]) -> Outcome {
    let mut t = String::new();
    // (instances, SPCC total, DPCC total) per kappa
    let mut groups: BTreeMap<u32, (usize, usize, usize)> = BTreeMap::new();
    for inst in suite {
        let pre_cuts = |mode| {
            // a zero budget stops right after the initial bound is applied
            let config = BncConfig { cost_cover: mode, time_limit: Some(0.0), ..BncConfig::default() };
            branch_and_cut(inst, &config, &NoClock, &mut ()).map(|r| r.counters.pre_cuts)
        };
        let (Ok(sp), Ok(dp)) = (pre_cuts(CostCoverMode::Spcc), pre_cuts(CostCoverMode::Dpcc)) else {
            log!(t, "{} solver error", inst.name);
            continue;
        };
        let g = groups.entry(kappa_of(inst)).or_default();
        g.0 += 1;
        g.1 += sp;
        g.2 += dp;
        log!(t, "{} kappa={} PRE-CUTS SPCC={sp} DPCC={dp}", inst.name, kappa_of(inst));
    }
    let (mut ok, mut strict) = (true, false);
    let mut parts = Vec::new();
    for (k, &(count, sp, dp)) in &groups {
        let (msp, mdp) = (sp as f64 / count as f64, dp as f64 / count as f64);
        ok &= mdp >= msp;
        strict |= mdp > msp;
        parts.push(format!("k{k}: {mdp:.2} vs {msp:.2}"));
        log!(t, "group kappa={k} mean PRE-CUTS SPCC={msp} DPCC={mdp}");
    }
    Outcome {
        pass: ok && strict && groups.values().map(|g| g.0).sum::<usize>() == suite.len(),
        summary: format!("PRE-CUTS ordering: mean DPCC vs SPCC [{}]", parts.join(", ")),
        transcript: t,
    }
}

fn criterion_9(suite: &[Instance], oracles: &[OracleOutcome], logs: &[SecLog]) -> Outcome {
    let (mut cuts, mut not_violated, mut not_satisfied) = (0, 0, 0);
    for log in logs {
        let inst = &suite[log.instance];
        for e in &log.events {
            cuts += 1;
            let violation = e.cut.violation(&inst.graph, &e.point);
            if violation <= SEC_MARGIN {
                not_violated += 1;
                eprintln!("instance {} {}: cut {:?} violation {violation}", log.instance, log.mode, e.cut);
            }
            let tours = log.final_tour.iter().chain(&oracles[log.instance].optimal_tours);
            for tour in tours {
                if e.cut.tour_slack(&inst.graph, tour) < 0 {
                    not_satisfied += 1;
                    eprintln!("instance {} {}: cut {:?} cuts off {:?}", log.instance, log.mode, e.cut, tour.vertices());
                }
            }
        }
    }
    Outcome {
        pass: not_violated == 0 && not_satisfied == 0 && cuts > 0,
        summary: format!(
            "SEC soundness: {cuts} cuts, {not_violated} not violated by their LP point (margin {SEC_MARGIN}), {not_satisfied} cutting off an optimal tour"
        ),
        transcript: String::new(),
    }
}

fn criterion_10() -> Outcome {
    let coords = CoordinateSet::new("spot", vec![(0.0, 0.0), (1.0, 1.0)]);
    let prizes = gen_prize(&coords, PrizeMode::Mod);
    let g = gap(12.0, 10.0);
    let tail = tailing_off(&[0.5; 6], 5, 0.001);
    Outcome {
        pass: g == 0.2 && prizes == [15, 56] && tail,
        summary: format!("spot checks: gap(12,10)={g}, MOD p(1),p(2)={prizes:?}, constant history tails off={tail}"),
        transcript: String::new(),
    }
}

/// Criteria 1-8 in order; the second element is criterion 1's SEC log.
fn run_deterministic() -> (Vec<Outcome>, Vec<SecLog>, Vec<Instance>, Vec<OracleOutcome>) {
    let suite = oracle_suite();
    let oracles: Vec<_> = suite.iter().map(oracle).collect();
    let (c1, logs) = criterion_1(&suite, &oracles);
    let desk = desk_suite();
    let outcomes = vec![
        c1,
        criterion_2(&suite, &oracles),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(&desk),
        criterion_8(&desk),
    ];
    (outcomes, logs, suite, oracles)
}

fn transcript(outcomes: &[Outcome]) -> String {
    outcomes.iter().enumerate().map(|(i, o)| format!("== criterion {}\n{}", i + 1, o.transcript)).collect()
}

fn report(number: usize, o: &Outcome) -> bool {
    println!("{} {number:>2} {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
    o.pass
}

fn main() -> ExitCode {
    let (first, logs, suite, oracles) = run_deterministic();
    let mut all = true;
    for (i, o) in first.iter().enumerate() {
        all &= report(i + 1, o);
    }
    all &= report(9, &criterion_9(&suite, &oracles, &logs));
    all &= report(10, &criterion_10());

    let (second, ..) = run_deterministic();
    let (a, b) = (transcript(&first), transcript(&second));
    let first_diff = a.lines().zip(b.lines()).position(|(x, y)| x != y);
    let c11 = Outcome {
        pass: a == b,
        summary: match first_diff {
            None if a == b => format!("determinism: criteria 1-8 transcripts identical across two runs ({} bytes)", a.len()),
            None => "determinism: transcripts differ in length".into(),
            Some(l) => format!("determinism: transcripts differ at line {}", l + 1),
        },
        transcript: String::new(),
    };
    all &= report(11, &c11);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
