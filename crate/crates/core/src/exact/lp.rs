//! Dense bounded-variable primal simplex.
//!
//! Each row `a·x (<=|>=|=) b` becomes `a·x - s = 0` with a slack `s` bounded
//! by the row sense; rows violated at the starting point also get a
//! phase-one artificial. Pricing is Dantzig's rule
//! until the iteration count reaches `10 * (rows + cols)`, then Bland's rule.
//! The tableau is refactored from the original matrix every
//! [`REFACTOR_EVERY`] pivots and before optimality is declared.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const INTEGRALITY_TOL: f64 = 1e-6;
const PIVOT_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LpRow {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// `min c·x` subject to `rows` and `lower <= x <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values; meaningful only when optimal.
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|&v| (v - libm::round(v)).abs() <= INTEGRALITY_TOL)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("simplex did not converge within {iterations} iterations")]
    NumericalFailure { iterations: usize },
    #[error("basis matrix became singular")]
    Singular,
}

/// Optimal basis of a solved LP, reusable as a warm start for the same
/// structural variables with changed bounds and rows added or removed. Rows
/// are identified by caller-chosen keys; slacks of rows the basis has not
/// seen start basic. Dropping a row whose slack was nonbasic makes the basis
/// unusable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    nv: usize,
    /// basic structural columns
    structural: Vec<usize>,
    /// nonbasic structural columns at their upper bound
    upper: Vec<bool>,
    /// row key -> (slack basic, slack nonbasic at upper)
    rows: BTreeMap<usize, (bool, bool)>,
}

impl Basis {
    pub fn rows(&self) -> usize {
        self.rows.len()
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// structural columns; slacks follow, then artificials
    nv: usize,
    /// original constraint rows (sparse), including slack and artificial columns
    a: Vec<Vec<(usize, f64)>>,
    /// B^-1 a
    t: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    iterations: usize,
    bland_after: usize,
    cap: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, r: usize, j: usize) -> f64 {
        self.t[r * self.cols + j]
    }

    /// Recomputes `B^-1 A` and the basic values from the original rows.
    ///
    /// A basic slack is a unit column covering its own row, so only the
    /// square system of the remaining basic columns on the uncovered rows is
    /// inverted (Gauss-Jordan); slack rows then follow by substitution.
    fn refactor(&mut self) -> Result<(), LpError> {
        let (rr, cc, nv) = (self.rows, self.cols, self.nv);
        let is_slack = |j: usize| (nv..nv + rr).contains(&j);
        let mut covered = vec![false; rr];
        let mut others = Vec::new();
        for (k, &b) in self.basis.iter().enumerate() {
            if is_slack(b) {
                covered[b - nv] = true;
            } else {
                others.push(k);
            }
        }
        let open: Vec<usize> = (0..rr).filter(|&r| !covered[r]).collect();
        let q = others.len();
        if open.len() != q {
            return Err(LpError::Singular);
        }
        // position among `others` of each non-slack basic column
        let mut slot = vec![usize::MAX; cc];
        for (l, &k) in others.iter().enumerate() {
            slot[self.basis[k]] = l;
        }
        let w = 2 * q;
        let mut m = vec![0.0; q * w];
        for (i, &r) in open.iter().enumerate() {
            for &(j, v) in &self.a[r] {
                if slot[j] != usize::MAX {
                    m[i * w + slot[j]] = v;
                }
            }
            m[i * w + q + i] = 1.0;
        }
        let mut order = vec![usize::MAX; q];
        let mut used = vec![false; q];
        for l in 0..q {
            let mut piv = usize::MAX;
            let mut best = 0.0;
            for i in 0..q {
                if !used[i] && m[i * w + l].abs() > best {
                    best = m[i * w + l].abs();
                    piv = i;
                }
            }
            if piv == usize::MAX || best < 1e-11 {
                return Err(LpError::Singular);
            }
            used[piv] = true;
            order[l] = piv;
            let p = m[piv * w + l];
            for v in &mut m[piv * w..(piv + 1) * w] {
                *v /= p;
            }
            let (head, rest) = m.split_at_mut(piv * w);
            let (prow, tail) = rest.split_at_mut(w);
            for row in head.chunks_exact_mut(w).chain(tail.chunks_exact_mut(w)) {
                let f = row[l];
                if f != 0.0 {
                    for (v, &pv) in row[l..].iter_mut().zip(&prow[l..]) {
                        *v -= f * pv;
                    }
                }
            }
        }
        // right-hand side of B x_B = -N x_N
        let rhs: Vec<f64> = self
            .a
            .iter()
            .map(|row| -row.iter().filter(|&&(j, _)| !self.in_basis[j]).map(|&(j, v)| v * self.x[j]).sum::<f64>())
            .collect();
        self.t.iter_mut().for_each(|v| *v = 0.0);
        for (l, &k) in others.iter().enumerate() {
            let inv = &m[order[l] * w + q..(order[l] + 1) * w];
            let trow = &mut self.t[k * cc..(k + 1) * cc];
            let mut xb = 0.0;
            for (i, &f) in inv.iter().enumerate() {
                if f != 0.0 {
                    for &(j, v) in &self.a[open[i]] {
                        trow[j] += f * v;
                    }
                    xb += f * rhs[open[i]];
                }
            }
            self.x[self.basis[k]] = xb;
        }
        // row r with basic slack s: s = sum_l A[r, b_l] z_l - A[r, .]
        for k in 0..rr {
            let b = self.basis[k];
            if !is_slack(b) {
                continue;
            }
            let r = b - nv;
            let mut trow = vec![0.0; cc];
            let mut xb = -rhs[r];
            for &(j, v) in &self.a[r] {
                trow[j] -= v;
                if slot[j] != usize::MAX {
                    let src = others[slot[j]];
                    for (t, &s) in trow.iter_mut().zip(&self.t[src * cc..(src + 1) * cc]) {
                        *t += v * s;
                    }
                    xb += v * self.x[j];
                }
            }
            self.t[k * cc..(k + 1) * cc].copy_from_slice(&trow);
            self.x[b] = xb;
        }
        Ok(())
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cc = self.cols;
        let p = self.t[r * cc + j];
        for v in &mut self.t[r * cc..(r + 1) * cc] {
            *v /= p;
        }
        let (head, rest) = self.t.split_at_mut(r * cc);
        let (prow, tail) = rest.split_at_mut(cc);
        for row in head.chunks_exact_mut(cc).chain(tail.chunks_exact_mut(cc)) {
            let f = row[j];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[j] = 0.0;
            }
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.at(r, j);
                }
            }
        }
        d
    }

    /// Entering variable and direction (+1 increase, -1 decrease).
    fn choose_entering(&self, d: &[f64]) -> Option<(usize, f64)> {
        let bland = self.iterations > self.bland_after;
        let mut best: Option<(usize, f64, f64)> = None;
        #[allow(clippy::needless_range_loop)]
        for j in 0..self.cols {
            if self.in_basis[j] || self.lo[j] == self.hi[j] {
                continue;
            }
            let at_lo = self.x[j] == self.lo[j];
            let at_hi = self.x[j] == self.hi[j];
            let free = !at_lo && !at_hi;
            let dir = if d[j] < -DUAL_TOL && (at_lo || free) {
                1.0
            } else if d[j] > DUAL_TOL && (at_hi || free) {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, _, m)| d[j].abs() > m) {
                best = Some((j, dir, d[j].abs()));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn run(&mut self, cost: &[f64]) -> Result<Outcome, LpError> {
        let mut since_refactor = 0;
        // reduced costs, updated with each pivot
        let mut d = self.reduced_costs(cost);
        loop {
            self.iterations += 1;
            if self.iterations > self.cap {
                return Err(LpError::NumericalFailure { iterations: self.iterations });
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
                d = self.reduced_costs(cost);
            }
            let Some((j, dir)) = self.choose_entering(&d) else {
                if since_refactor == 0 {
                    return Ok(Outcome::Optimal);
                }
                // confirm on a fresh factorisation
                self.refactor()?;
                since_refactor = 0;
                d = self.reduced_costs(cost);
                if self.choose_entering(&d).is_none() {
                    return Ok(Outcome::Optimal);
                }
                continue;
            };
            let bland = self.iterations > self.bland_after;
            let mut theta = self.hi[j] - self.lo[j];
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let alpha = dir * self.at(r, j);
                let b = self.basis[r];
                let lim = if alpha > PIVOT_TOL && self.lo[b].is_finite() {
                    ((self.x[b] - self.lo[b]) / alpha).max(0.0)
                } else if alpha < -PIVOT_TOL && self.hi[b].is_finite() {
                    ((self.hi[b] - self.x[b]) / -alpha).max(0.0)
                } else {
                    continue;
                };
                let take = if lim < theta - 1e-12 {
                    true
                } else if lim <= theta + 1e-12 {
                    // ties: prefer a bound flip, then Bland's lowest index or
                    // the largest pivot
                    match leave {
                        None => false,
                        Some((pr, _)) if bland => b < self.basis[pr],
                        Some((pr, _)) => alpha.abs() > self.at(pr, j).abs(),
                    }
                } else {
                    false
                };
                if take {
                    theta = theta.min(lim);
                    leave = Some((r, alpha));
                }
            }
            if !theta.is_finite() {
                return Ok(Outcome::Unbounded);
            }
            self.x[j] += dir * theta;
            for r in 0..self.rows {
                let b = self.basis[r];
                self.x[b] -= self.at(r, j) * dir * theta;
            }
            match leave {
                None => {
                    // bound flip
                    self.x[j] = if dir > 0.0 { self.hi[j] } else { self.lo[j] };
                }
                Some((r, alpha)) => {
                    let b = self.basis[r];
                    self.x[b] = if alpha > 0.0 { self.lo[b] } else { self.hi[b] };
                    self.pivot(r, j);
                    since_refactor += 1;
                    let dj = d[j];
                    let cc = self.cols;
                    for (dc, &tc) in d.iter_mut().zip(&self.t[r * cc..(r + 1) * cc]) {
                        *dc -= dj * tc;
                    }
                    d[j] = 0.0;
                }
            }
        }
    }
    /// Dual simplex from a dual-feasible basis until the basic values are
    /// within bounds. `false` when some row proves the problem infeasible.
    fn dual_run(&mut self, cost: &[f64]) -> Result<bool, LpError> {
        let mut d = self.reduced_costs(cost);
        let mut since_refactor = 0;
        loop {
            self.iterations += 1;
            if self.iterations > self.cap {
                return Err(LpError::NumericalFailure { iterations: self.iterations });
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
                d = self.reduced_costs(cost);
            }
            let bland = self.iterations > self.bland_after;
            let mut leave: Option<(usize, f64, bool)> = None;
            for r in 0..self.rows {
                let b = self.basis[r];
                let (viol, below) = if self.x[b] < self.lo[b] - FEASIBILITY_TOL * (1.0 + self.lo[b].abs()) {
                    (self.lo[b] - self.x[b], true)
                } else if self.x[b] > self.hi[b] + FEASIBILITY_TOL * (1.0 + self.hi[b].abs()) {
                    (self.x[b] - self.hi[b], false)
                } else {
                    continue;
                };
                if leave.is_none_or(|(_, v, _)| !bland && viol > v) {
                    leave = Some((r, viol, below));
                }
            }
            let Some((r, viol, below)) = leave else {
                return Ok(true);
            };
            let cc = self.cols;
            let mut enter: Option<(usize, f64)> = None;
            #[allow(clippy::needless_range_loop)]
            for j in 0..cc {
                if self.in_basis[j] || self.lo[j] == self.hi[j] {
                    continue;
                }
                let a = self.t[r * cc + j];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                // x_b moves by -a per unit of x_j
                let increase = if below { a < 0.0 } else { a > 0.0 };
                let movable = if increase { self.x[j] < self.hi[j] } else { self.x[j] > self.lo[j] };
                if !movable {
                    continue;
                }
                let ratio = d[j].abs() / a.abs();
                let better = match enter {
                    None => true,
                    Some((e, best)) => {
                        ratio < best - 1e-12
                            || (ratio <= best + 1e-12 && !bland && a.abs() > self.t[r * cc + e].abs())
                    }
                };
                if better {
                    enter = Some((j, ratio));
                }
            }
            let Some((j, _)) = enter else {
                // a tiny violation without a remedy is left to the final checks
                return Ok(viol <= 1e-7);
            };
            let b = self.basis[r];
            let target = if below { self.lo[b] } else { self.hi[b] };
            let delta = (self.x[b] - target) / self.t[r * cc + j];
            self.x[j] += delta;
            for i in 0..self.rows {
                let bi = self.basis[i];
                self.x[bi] -= self.t[i * cc + j] * delta;
            }
            self.x[b] = target;
            self.pivot(r, j);
            since_refactor += 1;
            let dj = d[j];
            for (dc, &tc) in d.iter_mut().zip(&self.t[r * cc..(r + 1) * cc]) {
                *dc -= dj * tc;
            }
            d[j] = 0.0;
        }
    }

    /// The basis with rows named by `keys`, unless an artificial is still
    /// basic.
    fn basis(&self, keys: &[usize]) -> Option<Basis> {
        let width = self.nv + self.rows;
        if self.basis.iter().any(|&b| b >= width) {
            return None;
        }
        let at_upper = |j: usize| !self.in_basis[j] && self.hi[j].is_finite() && self.x[j] == self.hi[j];
        Some(Basis {
            nv: self.nv,
            structural: self.basis.iter().copied().filter(|&b| b < self.nv).collect(),
            upper: (0..self.nv).map(at_upper).collect(),
            rows: keys.iter().enumerate().map(|(r, &k)| (k, (self.in_basis[self.nv + r], at_upper(self.nv + r)))).collect(),
        })
    }
}

fn slack_bounds(row: &LpRow) -> (f64, f64) {
    match row.sense {
        Sense::Le => (f64::NEG_INFINITY, row.rhs),
        Sense::Ge => (row.rhs, f64::INFINITY),
        Sense::Eq => (row.rhs, row.rhs),
    }
}

fn infeasible_solution(iterations: usize) -> LpSolution {
    LpSolution { status: LpStatus::Infeasible, values: Vec::new(), objective: f64::INFINITY, iterations }
}

fn unbounded_solution(iterations: usize) -> LpSolution {
    LpSolution { status: LpStatus::Unbounded, values: Vec::new(), objective: f64::NEG_INFINITY, iterations }
}

/// Extracts the optimal point and re-checks it against the original bounds
/// and rows.
fn finish(problem: &LpProblem, tab: &Tableau) -> Result<LpSolution, LpError> {
    let nv = problem.objective.len();
    let mut values: Vec<f64> = tab.x[..nv].to_vec();
    for (j, value) in values.iter_mut().enumerate() {
        let v = value.clamp(problem.lower[j], problem.upper[j]);
        if (v - *value).abs() > 1e-7 {
            return Err(LpError::NumericalFailure { iterations: tab.iterations });
        }
        *value = if v.abs() < FEASIBILITY_TOL { 0.0 } else { v };
    }
    for row in &problem.rows {
        let act = row.activity(&values);
        let tol = 1e-7 * (1.0 + row.rhs.abs());
        let ok = match row.sense {
            Sense::Le => act <= row.rhs + tol,
            Sense::Ge => act >= row.rhs - tol,
            Sense::Eq => (act - row.rhs).abs() <= tol,
        };
        if !ok {
            return Err(LpError::NumericalFailure { iterations: tab.iterations });
        }
    }
    let objective = problem.objective.iter().zip(&values).map(|(c, v)| c * v).sum();
    Ok(LpSolution { status: LpStatus::Optimal, values, objective, iterations: tab.iterations })
}

fn sparse_rows(problem: &LpProblem) -> Vec<Vec<(usize, f64)>> {
    let nv = problem.objective.len();
    problem
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut dense: BTreeMap<usize, f64> = BTreeMap::new();
            for &(j, v) in &row.coefs {
                *dense.entry(j).or_insert(0.0) += v;
            }
            dense.insert(nv + r, -1.0);
            dense.into_iter().filter(|&(_, v)| v != 0.0).collect()
        })
        .collect()
}

/// Re-solves from `warm` with the dual simplex, then polishes with primal
/// iterations. `None` when the basis does not fit or is not dual feasible.
fn solve_warm(
    problem: &LpProblem,
    keys: &[usize],
    warm: &Basis,
) -> Result<Option<(LpSolution, Option<Basis>)>, LpError> {
    let nv = problem.objective.len();
    let rr = problem.rows.len();
    if warm.nv != nv {
        return Ok(None);
    }
    let cols = nv + rr;
    let mut lo = problem.lower.clone();
    let mut hi: Vec<f64> = problem.upper.iter().zip(&problem.lower).map(|(&u, &l)| u.max(l)).collect();
    for row in &problem.rows {
        let (l, h) = slack_bounds(row);
        lo.push(l);
        hi.push(h);
    }
    let mut basis = warm.structural.clone();
    let mut upper = warm.upper.clone();
    for (r, k) in keys.iter().enumerate() {
        let (basic, at_upper) = warm.rows.get(k).copied().unwrap_or((true, false));
        if basic {
            basis.push(nv + r);
        }
        upper.push(at_upper);
    }
    if basis.len() != rr {
        return Ok(None);
    }
    let mut in_basis = vec![false; cols];
    for &b in &basis {
        if in_basis[b] {
            return Ok(None);
        }
        in_basis[b] = true;
    }
    let x = (0..cols)
        .map(|j| {
            let upper = upper[j];
            match (lo[j].is_finite(), hi[j].is_finite()) {
                (_, true) if upper => hi[j],
                (true, _) => lo[j],
                (false, true) => hi[j],
                (false, false) => 0.0,
            }
        })
        .collect();
    let mut tab = Tableau {
        rows: rr,
        cols,
        nv,
        a: sparse_rows(problem),
        t: vec![0.0; rr * cols],
        lo,
        hi,
        x,
        basis,
        in_basis,
        iterations: 0,
        bland_after: 10 * (rr + cols),
        cap: 50 * (rr + cols) + 1000,
    };
    tab.refactor()?;
    let mut cost = vec![0.0; cols];
    cost[..nv].copy_from_slice(&problem.objective);
    let d = tab.reduced_costs(&cost);
    let dual_feasible = (0..cols).all(|j| {
        tab.in_basis[j]
            || tab.lo[j] == tab.hi[j]
            || (tab.x[j] == tab.lo[j] && d[j] >= -1e-7)
            || (tab.x[j] == tab.hi[j] && d[j] <= 1e-7)
    });
    if !dual_feasible {
        return Ok(None);
    }
    if !tab.dual_run(&cost)? {
        return Ok(Some((infeasible_solution(tab.iterations), None)));
    }
    if let Outcome::Unbounded = tab.run(&cost)? {
        return Ok(Some((unbounded_solution(tab.iterations), None)));
    }
    let solution = finish(problem, &tab)?;
    Ok(Some((solution, tab.basis(keys))))
}

pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution, LpError> {
    solve_lp_warm(problem, None).map(|(s, _)| s)
}

/// Like [`solve_lp`], starting from `warm` when it fits; also returns the
/// optimal basis for later warm starts. Rows are keyed by position. Any
/// trouble on the warm path falls back to a cold solve.
pub fn solve_lp_warm(problem: &LpProblem, warm: Option<&Basis>) -> Result<(LpSolution, Option<Basis>), LpError> {
    let keys: Vec<usize> = (0..problem.rows.len()).collect();
    solve_lp_keyed(problem, &keys, warm)
}

/// Like [`solve_lp_warm`] with row `r` identified by `keys[r]`, so a basis
/// survives rows being removed or reordered between solves.
pub fn solve_lp_keyed(
    problem: &LpProblem,
    keys: &[usize],
    warm: Option<&Basis>,
) -> Result<(LpSolution, Option<Basis>), LpError> {
    assert_eq!(keys.len(), problem.rows.len(), "one key per row");
    let nv = problem.objective.len();
    if (0..nv).any(|j| problem.lower[j] > problem.upper[j] + FEASIBILITY_TOL) {
        return Ok((infeasible_solution(0), None));
    }
    if let Some(warm) = warm {
        if let Ok(Some(result)) = solve_warm(problem, keys, warm) {
            return Ok(result);
        }
    }
    solve_cold(problem, keys)
}

fn solve_cold(problem: &LpProblem, keys: &[usize]) -> Result<(LpSolution, Option<Basis>), LpError> {
    let nv = problem.objective.len();
    let rr = problem.rows.len();
    let mut lo = vec![0.0; nv];
    let mut hi = vec![0.0; nv];
    let mut x = vec![0.0; nv];
    for j in 0..nv {
        lo[j] = problem.lower[j];
        hi[j] = problem.upper[j].max(problem.lower[j]);
        x[j] = if lo[j].is_finite() {
            lo[j]
        } else if hi[j].is_finite() {
            hi[j]
        } else {
            0.0
        };
    }
    // Start from the slack basis where a row's activity already lies within
    // its bounds; only violated rows get a phase-one artificial.
    let mut bounds = Vec::with_capacity(rr);
    let mut needs_art = Vec::with_capacity(rr);
    for row in &problem.rows {
        let (l, h) = slack_bounds(row);
        let act = row.activity(&x[..nv]);
        bounds.push((l, h, act));
        needs_art.push(!(act >= l - FEASIBILITY_TOL && act <= h + FEASIBILITY_TOL));
    }
    let arts = needs_art.iter().filter(|&&b| b).count();
    let cols = nv + rr + arts;
    lo.resize(cols, 0.0);
    hi.resize(cols, 0.0);
    x.resize(cols, 0.0);
    let mut a = vec![0.0; rr * cols];
    let mut basis = Vec::with_capacity(rr);
    let mut next_art = nv + rr;
    for (r, row) in problem.rows.iter().enumerate() {
        for &(j, v) in &row.coefs {
            a[r * cols + j] += v;
        }
        let s = nv + r;
        a[r * cols + s] = -1.0;
        let (l, h, act) = bounds[r];
        (lo[s], hi[s]) = (l, h);
        if needs_art[r] {
            x[s] = act.clamp(l, h);
            let resid = x[s] - act;
            let art = next_art;
            next_art += 1;
            a[r * cols + art] = if resid >= 0.0 { 1.0 } else { -1.0 };
            hi[art] = f64::INFINITY;
            x[art] = resid.abs();
            basis.push(art);
        } else {
            x[s] = act;
            basis.push(s);
        }
    }
    // each row of B^-1 A is the row scaled so its basic entry is +1
    let mut t = a.clone();
    for (r, &b) in basis.iter().enumerate() {
        if a[r * cols + b] < 0.0 {
            for v in &mut t[r * cols..(r + 1) * cols] {
                *v = -*v;
            }
        }
    }
    let mut in_basis = vec![false; cols];
    for &b in &basis {
        in_basis[b] = true;
    }
    let a = a
        .chunks_exact(cols.max(1))
        .map(|row| row.iter().copied().enumerate().filter(|&(_, v)| v != 0.0).collect())
        .collect();
    let mut tab = Tableau {
        rows: rr,
        cols,
        nv,
        a,
        t,
        lo,
        hi,
        x,
        basis,
        in_basis,
        iterations: 0,
        bland_after: 10 * (rr + cols),
        cap: 50 * (rr + cols) + 1000,
    };

    let mut phase1 = vec![0.0; cols];
    for c in &mut phase1[nv + rr..] {
        *c = 1.0;
    }
    if arts > 0 {
        tab.run(&phase1)?;
    }
    let infeas: f64 = tab.x[nv + rr..].iter().sum();
    if infeas > FEASIBILITY_TOL * (1.0 + rr as f64) * 100.0 {
        return Ok((infeasible_solution(tab.iterations), None));
    }
    for art in nv + rr..cols {
        tab.hi[art] = 0.0;
        if !tab.in_basis[art] {
            tab.x[art] = 0.0;
        }
    }
    tab.refactor()?;
    let mut phase2 = vec![0.0; cols];
    phase2[..nv].copy_from_slice(&problem.objective);
    if let Outcome::Unbounded = tab.run(&phase2)? {
        return Ok((unbounded_solution(tab.iterations), None));
    }
    let solution = finish(problem, &tab)?;
    Ok((solution, tab.basis(keys)))
}
