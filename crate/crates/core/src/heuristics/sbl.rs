use super::{HeuristicError, HeuristicResult};
use crate::graph::Instance;
use crate::paths::suurballe;
use crate::tour::Tour;

/// Suurballe's heuristic. Every vertex with a disjoint path pair from the
/// root yields one candidate tour; the cheapest prize-feasible candidate
/// wins, otherwise the one with the most prize (then lowest cost).
pub fn sbl(instance: &Instance) -> Result<HeuristicResult, HeuristicError> {
    let g = &instance.graph;
    let mut best_feasible: Option<Tour> = None;
    let mut best_prize: Option<Tour> = None;
    for pair in suurballe(g, instance.root).into_iter().flatten() {
        let tour = Tour::new(g, instance.root, &pair.to_cycle()).expect("disjoint pair closes into a tour");
        if tour.is_prize_feasible(instance.quota) {
            if best_feasible.as_ref().is_none_or(|b| tour.cost() < b.cost()) {
                best_feasible = Some(tour);
            }
        } else if best_prize
            .as_ref()
            .is_none_or(|b| tour.prize() > b.prize() || (tour.prize() == b.prize() && tour.cost() < b.cost()))
        {
            best_prize = Some(tour);
        }
    }
    best_feasible
        .or(best_prize)
        .map(|t| HeuristicResult::from_tour(instance, t, "SBL"))
        .ok_or(HeuristicError::NoDisjointPair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_solve, DEFAULT_LIMIT_N};
    use crate::testing::{path_graph, random_instance, square_cycle};

    #[test]
    fn square_cycle_is_found() {
        let r = sbl(&square_cycle(4)).unwrap();
        assert!(r.feasible);
        let t = r.tour.unwrap();
        assert_eq!(t.vertices(), &[0, 1, 2, 3]);
        assert_eq!(t.cost(), 4);
    }

    #[test]
    fn path_has_no_pair() {
        assert_eq!(sbl(&path_graph(&[1, 2], 1)), Err(HeuristicError::NoDisjointPair));
    }

    #[test]
    fn never_beats_the_oracle() {
        for seed in 0..60 {
            let inst = random_instance(seed, 10, 2, 0.2);
            let opt = oracle_solve(&inst, DEFAULT_LIMIT_N).unwrap().optimal_cost();
            if let Ok(r) = sbl(&inst) {
                let t = r.tour.as_ref().unwrap();
                assert_eq!(t.recompute(&inst.graph), Some((t.cost(), t.prize())));
                if r.feasible {
                    assert!(t.cost() >= opt.unwrap(), "seed {seed}");
                }
            }
        }
    }
}
