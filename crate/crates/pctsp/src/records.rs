//! Per-run records, their frozen CSV schema, and grouped aggregates.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// First line of every runs CSV file; bump the version when columns change.
pub const CSV_HEADER_COMMENT: &str = "# pctsp-runs v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Sbl,
    BfsEc,
    SblPec,
    BcNone,
    BcSpcc,
    BcDpcc,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Sbl,
        Algorithm::BfsEc,
        Algorithm::SblPec,
        Algorithm::BcNone,
        Algorithm::BcSpcc,
        Algorithm::BcDpcc,
        Algorithm::Oracle,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Sbl => "SBL",
            Algorithm::BfsEc => "BFS-EC",
            Algorithm::SblPec => "SBL-PEC",
            Algorithm::BcNone => "BC-none",
            Algorithm::BcSpcc => "BC-SPCC",
            Algorithm::BcDpcc => "BC-DPCC",
            Algorithm::Oracle => "ORACLE",
        }
    }

    pub fn is_heuristic(self) -> bool {
        matches!(self, Algorithm::Sbl | Algorithm::BfsEc | Algorithm::SblPec)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown algorithm {s:?}; expected one of SBL, BFS-EC, SBL-PEC, BC-none, BC-SPCC, BC-DPCC, ORACLE"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: String,
    /// optimal | feasible | infeasible | timeout | infeasible_heuristic |
    /// no-tour | too-large
    pub status: String,
    pub cost: Option<u64>,
    pub prize: Option<u64>,
    pub quota: u64,
    pub n: usize,
    pub m: usize,
    pub kappa: Option<u32>,
    pub alpha: Option<f64>,
    /// Seconds; the only column that varies between identical runs.
    pub time: f64,
    pub lower_bound: Option<f64>,
    pub gap: Option<f64>,
    pub pre_cuts: Option<usize>,
    pub sec_cuts: Option<usize>,
    pub nodes: Option<usize>,
    pub seed: u64,
}

impl RunRecord {
    pub fn is_feasible(&self) -> bool {
        // a timed-out solve may still hold an incumbent
        matches!(self.status.as_str(), "optimal" | "feasible") || (self.status == "timeout" && self.cost.is_some())
    }

    /// Solved to proven optimality, or a feasible heuristic tour whose cost
    /// meets the lower bound.
    pub fn is_optimal(&self) -> bool {
        self.status == "optimal" || (self.is_feasible() && self.gap == Some(0.0))
    }
}

pub fn write_runs_csv<W: Write>(mut out: W, records: &[RunRecord]) -> Result<(), csv::Error> {
    writeln!(out, "{CSV_HEADER_COMMENT}")?;
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn runs_csv_string(records: &[RunRecord]) -> String {
    let mut buf = Vec::new();
    write_runs_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn read_runs_csv<R: Read>(input: R) -> Result<Vec<RunRecord>, csv::Error> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input).deserialize().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupBy {
    Kappa,
    Alpha,
    Quota,
    All,
}

impl FromStr for GroupBy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "kappa" => Ok(GroupBy::Kappa),
            "alpha" => Ok(GroupBy::Alpha),
            "quota" => Ok(GroupBy::Quota),
            "all" => Ok(GroupBy::All),
            _ => Err(format!("unknown group key {s:?}; expected kappa, alpha, quota or all")),
        }
    }
}

impl GroupBy {
    pub fn key(self, r: &RunRecord) -> String {
        match self {
            GroupBy::Kappa => r.kappa.map_or("-".into(), |k| k.to_string()),
            GroupBy::Alpha => r.alpha.map_or("-".into(), |a| a.to_string()),
            GroupBy::Quota => r.quota.to_string(),
            GroupBy::All => "all".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub group: String,
    pub algorithm: String,
    pub runs: usize,
    pub feas: usize,
    pub opt: usize,
    /// Mean over runs with a defined GAP.
    pub mean_gap: Option<f64>,
    /// Runs whose GAP is undefined (no tour or no lower bound).
    pub undefined_gap: usize,
    pub mean_time: f64,
    pub mean_pre_cuts: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn algorithm_rank(id: &str) -> usize {
    Algorithm::ALL.iter().position(|a| a.id() == id).unwrap_or(usize::MAX)
}

/// Groups sorted numerically where possible; algorithms in their canonical
/// order within a group.
pub fn aggregate(records: &[RunRecord], by: GroupBy) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, usize, String), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((by.key(r), algorithm_rank(&r.algorithm), r.algorithm.clone())).or_default().push(r);
    }
    let mut rows: Vec<AggregateRow> = groups
        .into_iter()
        .map(|((group, _, algorithm), rs)| AggregateRow {
            group,
            algorithm,
            runs: rs.len(),
            feas: rs.iter().filter(|r| r.is_feasible()).count(),
            opt: rs.iter().filter(|r| r.is_optimal()).count(),
            mean_gap: mean(rs.iter().filter_map(|r| r.gap)),
            undefined_gap: rs.iter().filter(|r| r.gap.is_none()).count(),
            mean_time: mean(rs.iter().map(|r| r.time)).unwrap_or(0.0),
            mean_pre_cuts: mean(rs.iter().filter_map(|r| r.pre_cuts.map(|p| p as f64))),
        })
        .collect();
    let numeric = |s: &str| s.parse::<f64>().unwrap_or(f64::INFINITY);
    rows.sort_by(|a, b| {
        numeric(&a.group)
            .total_cmp(&numeric(&b.group))
            .then_with(|| a.group.cmp(&b.group))
            .then_with(|| algorithm_rank(&a.algorithm).cmp(&algorithm_rank(&b.algorithm)))
    });
    rows
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".into(), |x| format!("{x:.4}"))
}

pub fn aggregate_markdown(rows: &[AggregateRow], by: GroupBy) -> String {
    let key = match by {
        GroupBy::Kappa => "kappa",
        GroupBy::Alpha => "alpha",
        GroupBy::Quota => "quota",
        GroupBy::All => "group",
    };
    let mut s = format!("| {key} | algorithm | runs | FEAS | OPT | GAP | GAP undefined | TIME | PRE-CUTS |\n");
    s.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {:.4} | {} |",
            r.group,
            r.algorithm,
            r.runs,
            r.feas,
            r.opt,
            cell(r.mean_gap),
            r.undefined_gap,
            r.mean_time,
            cell(r.mean_pre_cuts)
        );
    }
    s
}

pub fn aggregate_csv_string(rows: &[AggregateRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(instance: &str, algorithm: &str, status: &str, gap: Option<f64>, kappa: u32) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            algorithm: algorithm.into(),
            status: status.into(),
            cost: gap.map(|_| 10),
            prize: Some(3),
            quota: 3,
            n: 5,
            m: 7,
            kappa: Some(kappa),
            alpha: Some(0.5),
            time: 0.125,
            lower_bound: Some(10.0),
            gap,
            pre_cuts: None,
            sec_cuts: None,
            nodes: None,
            seed: 0,
        }
    }

    #[test]
    fn csv_round_trip_and_aggregate_agreement() {
        let records = vec![
            rec("a", "SBL", "feasible", Some(0.25), 2),
            rec("a", "SBL-PEC", "feasible", Some(0.0), 2),
            rec("b", "SBL", "infeasible_heuristic", None, 5),
            rec("b", "SBL-PEC", "feasible", Some(1.0 / 3.0), 5),
        ];
        let text = runs_csv_string(&records);
        assert!(text.starts_with(CSV_HEADER_COMMENT));
        let back = read_runs_csv(text.as_bytes()).unwrap();
        assert_eq!(back, records);
        assert_eq!(aggregate(&back, GroupBy::Kappa), aggregate(&records, GroupBy::Kappa));
    }

    #[test]
    fn undefined_gaps_render_as_nan() {
        let records = vec![rec("a", "SBL", "no-tour", None, 2), rec("b", "SBL", "infeasible_heuristic", None, 2)];
        let rows = aggregate(&records, GroupBy::Kappa);
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].feas, rows[0].undefined_gap), (0, 2));
        let md = aggregate_markdown(&rows, GroupBy::Kappa);
        assert!(md.lines().nth(2).unwrap().contains("| nan |"));
    }

    #[test]
    fn groups_sort_numerically() {
        let records = vec![rec("a", "SBL", "feasible", Some(0.0), 10), rec("b", "SBL", "feasible", Some(0.0), 5)];
        let rows = aggregate(&records, GroupBy::Kappa);
        assert_eq!(rows[0].group, "5");
        assert_eq!(rows[0].opt, 1);
    }

    #[test]
    fn algorithm_ids() {
        for a in Algorithm::ALL {
            assert_eq!(a.id().parse::<Algorithm>(), Ok(a));
        }
        assert!("bc-dpcc".parse::<Algorithm>().is_ok());
    }
}
