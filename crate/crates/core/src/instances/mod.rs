//! Benchmark instance construction: sparsified Euclidean graphs with MST or
//! EUC costs, the three prize generations, quota setting, the edge-split
//! prize transform, and a synthetic pollution road network.

mod coords;
mod costs;
mod pollution;
mod prizes;
mod sparsify;
mod split;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::GraphError;
use crate::graph::{Instance, InstanceMeta, Prize, SparseGraph, VertexId};

pub use coords::{euclidean, random_coordinates, CoordinateSet};
pub use costs::{assign_costs, minimum_spanning_tree};
pub use pollution::{synth_pollution_instance, PollutionGrid, PollutionParams};
pub use prizes::gen_prize;
pub use sparsify::sparsify;
pub use split::{edge_split_transform, RoadEdge, RoadNetwork};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("kappa * n = {target} exceeds the {complete} edges of the complete graph")]
    TooDense { target: usize, complete: usize },
    #[error("cannot keep the graph connected with only {target} edges")]
    CannotReachTarget { target: usize },
    #[error("alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("kappa must be positive")]
    InvalidKappa,
    #[error("need at least {needed} coordinates, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrizeMode {
    /// p(i) = 1
    One,
    /// p(i) = 1 + (7141 i + 73) mod 100 on 1-based labels
    Mod,
    /// p(i) = 1 + floor(99 d(root, i) / max_j d(root, j))
    Dist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CostMode {
    /// Tree edges of the Euclidean MST keep their rounded length; every
    /// other edge additionally pays the tree path between its endpoints.
    Mst,
    /// Rounded-up Euclidean length.
    Euc,
}

macro_rules! named_enum {
    ($ty:ty, $($variant:path => $name:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $name),+ })
            }
        }
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                $(if s.eq_ignore_ascii_case($name) { return Ok($variant); })+
                Err(format!("unknown {}: {s}", stringify!($ty)))
            }
        }
    };
}

named_enum!(PrizeMode, PrizeMode::One => "ONE", PrizeMode::Mod => "MOD", PrizeMode::Dist => "DIST");
named_enum!(CostMode, CostMode::Mst => "MST", CostMode::Euc => "EUC");

/// Parameters for one generated instance on a coordinate set.
#[derive(Clone, Debug, PartialEq)]
pub struct GenerationSpec {
    pub name: String,
    pub base: String,
    pub kappa: usize,
    pub prize_mode: PrizeMode,
    pub cost_mode: CostMode,
    pub alpha: f64,
    pub seed: u64,
}

/// Q = ceil(alpha * total). Products within 1e-9 of an integer are snapped
/// to it first so that decimal alphas do not pick up float noise.
pub fn set_quota(total: Prize, alpha: f64) -> Result<Prize, GenError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(GenError::InvalidAlpha(alpha));
    }
    let product = alpha * total as f64;
    let nearest = libm::round(product);
    let q = if libm::fabs(product - nearest) <= 1e-9 * nearest.max(1.0) { nearest } else { libm::ceil(product) };
    Ok((q as Prize).min(total))
}

/// Sparsify the complete graph on `coords`, assign prizes and costs, and
/// set the quota. The root is the vertex labelled 1 (the first coordinate).
pub fn generate(coords: &CoordinateSet, spec: &GenerationSpec) -> Result<Instance, GenError> {
    let topology = sparsify(coords, spec.kappa, spec.seed)?;
    let prizes = gen_prize(coords, spec.prize_mode);
    let costs = assign_costs(&topology, coords, spec.cost_mode);
    let edges: Vec<_> = topology.iter().zip(&costs).map(|(&(u, v), &c)| (u, v, c)).collect();
    let graph = SparseGraph::with_labels(coords.labels.clone(), prizes, &edges)?;
    let quota = set_quota(graph.total_prize(), spec.alpha)?;
    let meta = InstanceMeta {
        base: Some(spec.base.clone()),
        kappa: Some(spec.kappa as u32),
        alpha: Some(spec.alpha),
        prize_mode: Some(spec.prize_mode.to_string()),
        cost_mode: Some(spec.cost_mode.to_string()),
        seed: Some(spec.seed),
    };
    Ok(Instance::new(spec.name.clone(), graph, 0, quota)?.with_meta(meta))
}

/// Random connected graph: a random spanning tree plus uniformly drawn extra
/// edges up to `min(kappa * n, n(n-1)/2)` edges. Costs in `1..=max_cost`,
/// prizes in `0..=max_prize`, root 0, quota `ceil(alpha * total)`.
pub fn random_connected_instance(
    seed: u64,
    n: usize,
    kappa: usize,
    max_cost: u64,
    max_prize: Prize,
    alpha: f64,
) -> Instance {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = (kappa * n).min(n * (n - 1) / 2).max(n - 1);
    let mut present = alloc::vec![false; n * n];
    let mut edges: Vec<(VertexId, VertexId, u64)> = Vec::with_capacity(target);
    let add = |u: usize, v: usize, c: u64, present: &mut Vec<bool>, edges: &mut Vec<_>| {
        present[u * n + v] = true;
        present[v * n + u] = true;
        edges.push((u.min(v), u.max(v), c));
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let c = rng.gen_range(1..=max_cost);
        add(u, v, c, &mut present, &mut edges);
    }
    while edges.len() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !present[u * n + v] {
            let c = rng.gen_range(1..=max_cost);
            add(u, v, c, &mut present, &mut edges);
        }
    }
    let prizes: Vec<Prize> = (0..n).map(|_| rng.gen_range(0..=max_prize)).collect();
    let graph = SparseGraph::from_dense(prizes, &edges).expect("spanning tree keeps it connected");
    let quota = set_quota(graph.total_prize(), alpha).unwrap_or(0);
    let meta = InstanceMeta {
        base: Some("random".into()),
        kappa: Some(kappa as u32),
        alpha: Some(alpha),
        prize_mode: None,
        cost_mode: None,
        seed: Some(seed),
    };
    Instance::new(format!("rand-n{n}-k{kappa}-s{seed}"), graph, 0, quota).unwrap().with_meta(meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quota_rounding() {
        assert_eq!(set_quota(100, 0.25), Ok(25));
        assert_eq!(set_quota(7, 0.5), Ok(4));
        assert_eq!(set_quota(7, 1.0), Ok(7));
        assert_eq!(set_quota(10, 0.3), Ok(3));
        assert_eq!(set_quota(10, 0.6), Ok(6));
        assert!(matches!(set_quota(10, 0.0), Err(GenError::InvalidAlpha(_))));
        assert!(matches!(set_quota(10, 1.5), Err(GenError::InvalidAlpha(_))));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [PrizeMode::One, PrizeMode::Mod, PrizeMode::Dist] {
            assert_eq!(m.to_string().parse::<PrizeMode>(), Ok(m));
        }
        assert_eq!("mst".parse::<CostMode>(), Ok(CostMode::Mst));
        assert!("manhattan".parse::<CostMode>().is_err());
    }

    #[test]
    fn random_instances_are_deterministic() {
        let a = random_connected_instance(7, 12, 3, 20, 10, 0.5);
        let b = random_connected_instance(7, 12, 3, 20, 10, 0.5);
        assert_eq!(a, b);
        assert_eq!(a.m(), 36);
        let c = random_connected_instance(7, 6, 3, 20, 10, 0.5);
        assert_eq!(c.m(), 15);
    }

    #[test]
    fn generate_sets_root_and_meta() {
        let coords = random_coordinates(20, 3);
        let spec = GenerationSpec {
            name: "g".into(),
            base: "random:20".into(),
            kappa: 3,
            prize_mode: PrizeMode::Mod,
            cost_mode: CostMode::Mst,
            alpha: 0.5,
            seed: 11,
        };
        let inst = generate(&coords, &spec).unwrap();
        assert_eq!(inst.m(), 60);
        assert_eq!(inst.graph.label(inst.root), 1);
        assert_eq!(inst.graph.prize(inst.root), 15);
        assert_eq!(inst.quota, set_quota(inst.graph.total_prize(), 0.5).unwrap());
        assert_eq!(crate::metric::count_metric_edges(&inst.graph), inst.n() - 1);
    }
}
