use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Planar coordinates with 1-based external labels. The root is label 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateSet {
    pub name: alloc::string::String,
    pub labels: Vec<u64>,
    pub points: Vec<(f64, f64)>,
}

impl CoordinateSet {
    /// Labels `1..=points.len()`.
    pub fn new(name: impl Into<alloc::string::String>, points: Vec<(f64, f64)>) -> Self {
        let labels = (1..=points.len() as u64).collect();
        CoordinateSet { name: name.into(), labels, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.points[i], self.points[j])
    }
}

pub fn euclidean(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::hypot(a.0 - b.0, a.1 - b.1)
}

/// `n` points uniform in the square `[0, 1000)^2`.
pub fn random_coordinates(n: usize, seed: u64) -> CoordinateSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| (rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect();
    CoordinateSet::new(alloc::format!("random{n}"), points)
}
