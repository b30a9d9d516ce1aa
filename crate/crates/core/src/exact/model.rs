use alloc::vec;
use alloc::vec::Vec;

use super::lp::{LpProblem, LpRow, Sense};
use super::ExactError;
use crate::graph::{Cost, Instance, Prize, VertexId};

/// Relaxable ILP: one variable per edge (`x_e`, indices `0..m`) and one per
/// vertex (`y_v`, indices `m..m+n`). Sub-tour elimination rows are not part
/// of the model; they are separated lazily.
#[derive(Clone, Debug, PartialEq)]
pub struct IlpModel {
    pub m: usize,
    pub n: usize,
    pub costs: Vec<Cost>,
    pub prizes: Vec<Prize>,
    pub quota: Prize,
    pub root: VertexId,
    /// Prize row, root row, then one degree row per vertex.
    pub rows: Vec<LpRow>,
}

impl IlpModel {
    pub fn num_vars(&self) -> usize {
        self.m + self.n
    }

    pub fn edge_var(&self, e: usize) -> usize {
        e
    }

    pub fn vertex_var(&self, v: VertexId) -> usize {
        self.m + v
    }

    pub fn objective(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.num_vars()];
        for (e, &cost) in self.costs.iter().enumerate() {
            c[e] = cost as f64;
        }
        c
    }

    /// LP relaxation with the given extra rows and variable bounds.
    pub fn relaxation(&self, cuts: &[LpRow], lower: &[f64], upper: &[f64]) -> LpProblem {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(cuts);
        LpProblem { objective: self.objective(), lower: lower.to_vec(), upper: upper.to_vec(), rows }
    }

    /// Unit box bounds.
    pub fn default_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0; self.num_vars()], vec![1.0; self.num_vars()])
    }
}

pub fn build_model(instance: &Instance) -> Result<IlpModel, ExactError> {
    let g = &instance.graph;
    if g.total_prize() < instance.quota {
        return Err(ExactError::TrivialInfeasible);
    }
    let (m, n) = (g.m(), g.n());
    let mut rows = Vec::with_capacity(n + 2);
    rows.push(LpRow {
        coefs: (0..n).filter(|&v| g.prize(v) > 0).map(|v| (m + v, g.prize(v) as f64)).collect(),
        sense: Sense::Ge,
        rhs: instance.quota as f64,
    });
    rows.push(LpRow { coefs: vec![(m + instance.root, 1.0)], sense: Sense::Eq, rhs: 1.0 });
    for v in 0..n {
        let mut coefs: Vec<(usize, f64)> = g.neighbors(v).iter().map(|&(_, e)| (e, 1.0)).collect();
        coefs.push((m + v, -2.0));
        rows.push(LpRow { coefs, sense: Sense::Eq, rhs: 0.0 });
    }
    Ok(IlpModel {
        m,
        n,
        costs: g.edges().iter().map(|e| e.cost).collect(),
        prizes: g.prizes().to_vec(),
        quota: instance.quota,
        root: instance.root,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::lp::{solve_lp, LpStatus};
    use crate::oracle::{oracle_solve, DEFAULT_LIMIT_N};
    use crate::testing::{random_instance, triangle};

    #[test]
    fn triangle_counts() {
        let model = build_model(&triangle(3)).unwrap();
        assert_eq!((model.m, model.n), (3, 3));
        assert_eq!(model.num_vars(), 6);
        assert_eq!(model.rows.len(), 5);
    }

    #[test]
    fn quota_above_total_prize() {
        assert_eq!(build_model(&triangle(4)), Err(ExactError::TrivialInfeasible));
    }

    #[test]
    fn triangle_relaxation_is_integral() {
        let model = build_model(&triangle(3)).unwrap();
        let (lo, hi) = model.default_bounds();
        let s = solve_lp(&model.relaxation(&[], &lo, &hi)).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-9);
        assert!(s.is_integral());
    }

    #[test]
    fn relaxation_bounds_the_optimum() {
        for seed in 0..40 {
            let inst = random_instance(seed, 10, 3, 0.4);
            let Ok(model) = build_model(&inst) else { continue };
            let (lo, hi) = model.default_bounds();
            let s = solve_lp(&model.relaxation(&[], &lo, &hi)).unwrap();
            if let Some(opt) = oracle_solve(&inst, DEFAULT_LIMIT_N).unwrap().optimal_cost() {
                assert_eq!(s.status, LpStatus::Optimal);
                assert!(s.objective <= opt as f64 + 1e-6, "seed {seed}");
            }
        }
    }
}
