//! Synthetic stand-in for air-quality road instances: a perturbed street
//! grid under a smooth pollution field, with edge cost equal to the mean
//! pollution of the cells a road crosses times its length.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{euclidean, edge_split_transform, set_quota, GenError, RoadEdge, RoadNetwork};
use crate::graph::{Instance, InstanceMeta, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct PollutionParams {
    /// Number of road intersections before edge splitting.
    pub intersections: usize,
    pub spacing: f64,
    /// Maximum displacement of an intersection, as a fraction of `spacing`.
    pub jitter: f64,
    pub diagonal_prob: f64,
    pub removal_prob: f64,
    pub cell_size: f64,
    /// Background pollution level. With no bumps and an integral base every
    /// cost is an exact multiple of the length.
    pub base: f64,
    pub bumps: usize,
    pub peak: f64,
    pub bump_radius: f64,
    pub alpha: f64,
}

impl Default for PollutionParams {
    fn default() -> Self {
        PollutionParams {
            intersections: 36,
            spacing: 100.0,
            jitter: 0.3,
            diagonal_prob: 0.35,
            removal_prob: 0.15,
            cell_size: 40.0,
            base: 1.0,
            bumps: 5,
            peak: 6.0,
            bump_radius: 90.0,
            alpha: 0.05,
        }
    }
}

/// Square lattice of pollution values covering a bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct PollutionGrid {
    pub origin: (f64, f64),
    pub cell_size: f64,
    pub cols: usize,
    pub rows: usize,
    pub values: Vec<f64>,
}

impl PollutionGrid {
    fn cell_of(&self, p: (f64, f64)) -> usize {
        let c = libm::floor((p.0 - self.origin.0) / self.cell_size) as isize;
        let r = libm::floor((p.1 - self.origin.1) / self.cell_size) as isize;
        let c = c.clamp(0, self.cols as isize - 1) as usize;
        let r = r.clamp(0, self.rows as isize - 1) as usize;
        r * self.cols + c
    }

    /// Mean value over the distinct cells the segment `a -> b` passes through.
    pub fn mean_along(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let len = euclidean(a, b);
        let steps = (libm::ceil(8.0 * len / self.cell_size) as usize).max(1);
        let mut cells = BTreeSet::new();
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            cells.insert(self.cell_of((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))));
        }
        cells.iter().map(|&c| self.values[c]).sum::<f64>() / cells.len() as f64
    }
}

fn connected_without(n: usize, edges: &[(VertexId, VertexId)], alive: &[bool]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if alive[i] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

/// Road network, pollution field and split instance for one seed. The root
/// is the intersection nearest the centre; `Q = ceil(alpha * total length)`.
pub fn synth_pollution_instance(params: &PollutionParams, seed: u64) -> Result<(Instance, PollutionGrid), GenError> {
    let n = params.intersections;
    if n < 3 {
        return Err(GenError::TooFewVertices { needed: 3, got: n });
    }
    if !(params.spacing > 0.0 && params.cell_size > 0.0 && params.base >= 0.0) {
        return Err(GenError::InvalidParameter("spacing, cell_size and base must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = libm::ceil(libm::sqrt(n as f64)) as usize;
    let jitter = params.jitter * params.spacing;
    let points: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (c, r) = ((i % cols) as f64, (i / cols) as f64);
            let dx = if jitter > 0.0 { rng.gen_range(-jitter..=jitter) } else { 0.0 };
            let dy = if jitter > 0.0 { rng.gen_range(-jitter..=jitter) } else { 0.0 };
            (c * params.spacing + dx, r * params.spacing + dy)
        })
        .collect();

    let at = |c: usize, r: usize| -> Option<usize> {
        let i = r * cols + c;
        (c < cols && i < n).then_some(i)
    };
    let mut streets = Vec::new();
    for i in 0..n {
        let (c, r) = (i % cols, i / cols);
        for j in [at(c + 1, r), at(c, r + 1)].into_iter().flatten() {
            streets.push((i, j));
        }
        if rng.gen_bool(params.diagonal_prob) {
            if let Some(j) = at(c + 1, r + 1) {
                streets.push((i, j));
            }
        }
        if c > 0 && rng.gen_bool(params.diagonal_prob) {
            if let Some(j) = at(c - 1, r + 1) {
                streets.push((i, j));
            }
        }
    }
    let mut alive = vec![true; streets.len()];
    let mut order: Vec<usize> = (0..streets.len()).collect();
    order.shuffle(&mut rng);
    for e in order {
        if rng.gen_bool(params.removal_prob) {
            alive[e] = false;
            if !connected_without(n, &streets, &alive) {
                alive[e] = true;
            }
        }
    }
    if !connected_without(n, &streets, &alive) {
        return Err(GenError::InvalidParameter("street grid is disconnected"));
    }

    // pollution field over the bounding box
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for &(x, y) in &points {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let gcols = (libm::floor((hi.0 - lo.0) / params.cell_size) as usize) + 1;
    let grows = (libm::floor((hi.1 - lo.1) / params.cell_size) as usize) + 1;
    let centres: Vec<((f64, f64), f64)> = (0..params.bumps)
        .map(|_| {
            let c = (rng.gen_range(lo.0..=hi.0), rng.gen_range(lo.1..=hi.1));
            (c, rng.gen_range(0.5..=1.0) * params.peak)
        })
        .collect();
    let two_sigma_sq = 2.0 * params.bump_radius * params.bump_radius;
    let values = (0..grows * gcols)
        .map(|k| {
            let centre = (
                lo.0 + ((k % gcols) as f64 + 0.5) * params.cell_size,
                lo.1 + ((k / gcols) as f64 + 0.5) * params.cell_size,
            );
            params.base
                + centres
                    .iter()
                    .map(|&(c, h)| {
                        let d = euclidean(c, centre);
                        h * libm::exp(-d * d / two_sigma_sq)
                    })
                    .sum::<f64>()
        })
        .collect();
    let grid = PollutionGrid { origin: lo, cell_size: params.cell_size, cols: gcols, rows: grows, values };

    let edges = streets
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(&(u, v), _)| {
            let length = libm::ceil(euclidean(points[u], points[v])) as u64;
            let cost = libm::round(grid.mean_along(points[u], points[v]) * length as f64) as u64;
            RoadEdge { u, v, length, cost }
        })
        .collect();
    let net = RoadNetwork { labels: (1..=n as u64).collect(), prizes: vec![0; n], edges };

    let mid = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let root = (0..n)
        .min_by(|&a, &b| euclidean(points[a], mid).total_cmp(&euclidean(points[b], mid)).then(a.cmp(&b)))
        .unwrap();
    let mut inst = edge_split_transform(format!("pollution-n{n}-s{seed}"), &net, root, 0)?;
    inst.quota = set_quota(inst.graph.total_prize(), params.alpha)?;
    inst.meta = Some(InstanceMeta {
        base: Some("pollution".into()),
        alpha: Some(params.alpha),
        prize_mode: Some("LENGTH".into()),
        cost_mode: Some("POLLUTION".into()),
        seed: Some(seed),
        kappa: None,
    });
    Ok((inst, grid))
}
