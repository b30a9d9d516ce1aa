//! Argument parsing and the subcommand bodies. `main` only maps the result
//! to an exit code.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pctsp_core::exact::CostCoverMode;
use pctsp_core::metric::{count_metric_edges, metric_surplus};
use pctsp_core::oracle::{OracleError, DEFAULT_LIMIT_N};
use pctsp_core::paths::disjoint_prize_ratio;
use pctsp_core::preprocess::preprocess;
use pctsp_core::Instance;
use serde::Serialize;
use thiserror::Error;

use crate::json::{load_instance, save_instance, InstanceFileError};
use crate::manifest::{build_instance, load_manifest, ManifestError};
use crate::records::{
    aggregate, aggregate_csv_string, aggregate_markdown, runs_csv_string, Algorithm, GroupBy, RunRecord,
};
use crate::runner::{
    bench, run_heuristic, run_oracle, run_solver, heuristic_lower_bound, worker_count, JsonLinesTrace, Run,
    RunConfig, RunError, WORKERS_ENV,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pctsp", version, about = "Prize-collecting TSP heuristics, exact solver and benchmarks")]
pub struct Cli {
    /// Recorded with every run; all algorithms are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (`generate`, `bench`: output directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to json, or md for `bench`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct SolverArgs {
    /// Seconds; unlimited when omitted.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Cutting rounds considered by the tailing-off test.
    #[arg(long, default_value_t = 5)]
    pub tau: usize,
    /// Minimum gap improvement over `tau` rounds.
    #[arg(long, default_value_t = 0.001)]
    pub gamma: f64,
    /// Strong branching up to this depth.
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one instance file per manifest spec.
    Generate { manifest: PathBuf },
    /// Run SBL, BFS-EC or SBL-PEC.
    Heuristic {
        instance: PathBuf,
        /// SBL, BFS-EC or SBL-PEC.
        #[arg(long, default_value = "SBL-PEC", value_parser = parse_heuristic)]
        algorithm: Algorithm,
        /// Largest step size tried by the path-exchange search.
        #[arg(long, default_value_t = pctsp_core::heuristics::BETA_MAX)]
        beta_max: usize,
        /// Include the tour (vertex labels) in the record.
        #[arg(long)]
        emit_tour: bool,
        /// Seconds of branch & cut spent on a lower bound for GAP; 0 skips it.
        #[arg(long, default_value_t = 0.0)]
        lb_budget: f64,
    },
    /// Branch & cut.
    Solve {
        instance: PathBuf,
        /// Cost-cover fixing: none, spcc or dpcc.
        #[arg(long, default_value = "dpcc")]
        cost_cover: CostCoverMode,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write one JSON line per search node to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Include the tour (vertex labels) in the record.
        #[arg(long)]
        emit_tour: bool,
    },
    /// Exhaustive search (small instances only).
    Oracle {
        instance: PathBuf,
        /// Refuse instances with more vertices than this.
        #[arg(long, default_value_t = DEFAULT_LIMIT_N)]
        limit: usize,
        /// Include the tour (vertex labels) in the record.
        #[arg(long)]
        emit_tour: bool,
    },
    /// Run algorithms over every instance file of a directory.
    Bench {
        dir: PathBuf,
        /// Comma-separated algorithm ids.
        #[arg(long, value_delimiter = ',', default_value = "SBL,BFS-EC,SBL-PEC")]
        algorithms: Vec<Algorithm>,
        /// kappa, alpha, quota or all.
        #[arg(long, default_value = "kappa")]
        group_by: GroupBy,
        /// Parallel runs; defaults to the available cores.
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
        /// Seconds of branch & cut per instance for heuristic lower bounds; 0 skips it.
        #[arg(long, default_value_t = 60.0)]
        lb_budget: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Dataset statistics of an instance.
    Stats { instance: PathBuf },
}

fn parse_heuristic(s: &str) -> Result<Algorithm, String> {
    let a: Algorithm = s.parse()?;
    if a.is_heuristic() {
        Ok(a)
    } else {
        Err(format!("{a} is not a heuristic; use `solve` or `oracle`"))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] InstanceFileError),
    #[error("{0}")]
    Io(String),
    #[error("spec {name}: {source}")]
    Spec { name: String, source: ManifestError },
    #[error(transparent)]
    Manifest(ManifestError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Run(RunError),
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Load(e) => CliError::Load(e),
            RunError::Oracle(e) => CliError::Oracle(e),
            e @ (RunError::Dir { .. } | RunError::EmptyDir(_) | RunError::Trace(_)) => CliError::Io(e.to_string()),
            e => CliError::Run(e),
        }
    }
}

impl CliError {
    /// 1: input/output or parse failures; 3: oracle size limit; 4: solver
    /// failure. (clap itself exits 2 on usage errors.)
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Load(_) | CliError::Io(_) | CliError::Spec { .. } | CliError::Manifest(_) => 1,
            CliError::Oracle(_) => 3,
            CliError::Run(_) => 4,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn key_value_markdown<T: Serialize>(value: &T) -> String {
    let mut s = String::from("| field | value |\n|---|---|\n");
    if let serde_json::Value::Object(map) = serde_json::to_value(value).expect("plain record") {
        for (k, v) in map {
            let v = match v {
                serde_json::Value::Null => "nan".to_string(),
                serde_json::Value::String(s) => s,
                v => v.to_string(),
            };
            s.push_str(&format!("| {k} | {v} |\n"));
        }
    }
    s
}

fn format_run(run: &Run, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(run).expect("plain record") + "\n",
        Format::Csv => runs_csv_string(std::slice::from_ref(&run.record)),
        Format::Md => key_value_markdown(run),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    /// m / n
    pub kappa_effective: f64,
    pub metric_edges: usize,
    pub metric_surplus: f64,
    /// Prize share of the best least-cost disjoint pair from the root.
    pub disjoint_prize_ratio: f64,
    /// Prize share kept by preprocessing.
    pub preprocess_prize_ratio: f64,
}

pub fn stats(inst: &Instance) -> StatsRecord {
    let g = &inst.graph;
    let kept = match preprocess(inst) {
        Ok((_, report)) => report.prize_ratio,
        Err(_) if g.total_prize() > 0 => g.prize(inst.root) as f64 / g.total_prize() as f64,
        Err(_) => 0.0,
    };
    StatsRecord {
        instance: inst.name.clone(),
        n: g.n(),
        m: g.m(),
        kappa_effective: g.m() as f64 / g.n() as f64,
        metric_edges: count_metric_edges(g),
        metric_surplus: metric_surplus(g),
        disjoint_prize_ratio: disjoint_prize_ratio(inst),
        preprocess_prize_ratio: kept,
    }
}

fn budget(seconds: f64) -> Option<f64> {
    (seconds > 0.0).then_some(seconds)
}

fn strip_tour(mut run: Run, emit_tour: bool) -> Run {
    if !emit_tour {
        run.tour = None;
    }
    run
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    let format = cli.format.unwrap_or(Format::Json);
    let mut cfg = RunConfig { seed: cli.seed, ..RunConfig::default() };
    let solver_cfg = |cfg: &mut RunConfig, s: &SolverArgs| {
        cfg.time_limit = s.time_limit;
        cfg.tau = s.tau;
        cfg.gamma = s.gamma;
        cfg.delta = s.delta;
    };
    match cli.command {
        Command::Generate { manifest } => {
            let spec_list = load_manifest(&manifest).map_err(CliError::Manifest)?;
            let dir = manifest.parent().unwrap_or(Path::new("."));
            let out_dir = out.unwrap_or(Path::new("."));
            fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
            let mut first_error = None;
            for spec in &spec_list.specs {
                let result = build_instance(spec, dir)
                    .map_err(|source| CliError::Spec { name: spec.name.clone(), source })
                    .and_then(|inst| Ok(save_instance(&inst, &out_dir.join(format!("{}.json", spec.name)))?));
                if let Err(e) = result {
                    eprintln!("error: {e}");
                    first_error.get_or_insert(e);
                }
            }
            first_error.map_or(Ok(()), Err)
        }
        Command::Heuristic { instance, algorithm, beta_max, emit_tour, lb_budget } => {
            let inst = load_instance(&instance)?;
            cfg.beta_max = beta_max;
            cfg.lb_budget = budget(lb_budget);
            let lb = match cfg.lb_budget {
                Some(_) => heuristic_lower_bound(&inst, &cfg)
                    .map_err(|source| RunError::Solver { instance: inst.name.clone(), source })?,
                None => None,
            };
            let run = strip_tour(run_heuristic(&inst, algorithm, &cfg, lb), emit_tour);
            emit(out, &format_run(&run, format))
        }
        Command::Solve { instance, cost_cover, solver, trace, emit_tour } => {
            let inst = load_instance(&instance)?;
            solver_cfg(&mut cfg, &solver);
            let solve_err = |source| RunError::Solver { instance: inst.name.clone(), source };
            let run = match &trace {
                Some(path) => {
                    let file = fs::File::create(path).map_err(io_err(path))?;
                    let mut observer = JsonLinesTrace::new(io::BufWriter::new(file));
                    let run = run_solver(&inst, cost_cover, &cfg, &mut observer).map_err(solve_err)?;
                    observer.finish().map_err(io_err(path))?;
                    run
                }
                None => run_solver(&inst, cost_cover, &cfg, &mut ()).map_err(solve_err)?,
            };
            emit(out, &format_run(&strip_tour(run, emit_tour), format))
        }
        Command::Oracle { instance, limit, emit_tour } => {
            let inst = load_instance(&instance)?;
            cfg.oracle_limit = limit;
            let run = strip_tour(run_oracle(&inst, &cfg)?, emit_tour);
            emit(out, &format_run(&run, format))
        }
        Command::Bench { dir, algorithms, group_by, workers, lb_budget, solver } => {
            cfg.lb_budget = budget(lb_budget);
            solver_cfg(&mut cfg, &solver);
            if solver.time_limit.is_none() {
                cfg.time_limit = RunConfig::default().time_limit;
            }
            let records = bench(&dir, &algorithms, &cfg, worker_count(workers))?;
            let rows = aggregate(&records, group_by);
            let md = aggregate_markdown(&rows, group_by);
            let format = cli.format.unwrap_or(Format::Md);
            match out {
                Some(out_dir) => {
                    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
                    let write = |name: &str, text: &str| {
                        let path = out_dir.join(name);
                        fs::write(&path, text).map_err(io_err(&path))
                    };
                    write("runs.csv", &runs_csv_string(&records))?;
                    write("aggregate.csv", &aggregate_csv_string(&rows))?;
                    write("aggregate.md", &md)?;
                    emit(None, &md)
                }
                None => emit(None, &bench_text(&records, &rows, &md, format)),
            }
        }
        Command::Stats { instance } => {
            let record = stats(&load_instance(&instance)?);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&record).expect("plain record") + "\n",
                Format::Md => key_value_markdown(&record),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.serialize(&record).expect("writing to memory");
                    String::from_utf8(w.into_inner().expect("flush")).expect("UTF-8")
                }
            };
            emit(out, &text)
        }
    }
}

fn bench_text(
    records: &[RunRecord],
    rows: &[crate::records::AggregateRow],
    md: &str,
    format: Format,
) -> String {
    match format {
        Format::Md => md.to_string(),
        Format::Csv => runs_csv_string(records),
        Format::Json => {
            let value = serde_json::json!({ "runs": records, "aggregate": rows });
            serde_json::to_string_pretty(&value).expect("plain records") + "\n"
        }
    }
}
