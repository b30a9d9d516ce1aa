use alloc::vec::Vec;

use super::{CoordinateSet, PrizeMode};
use crate::graph::Prize;

/// Vertex prizes for the three benchmark generations. Labels are 1-based;
/// the root is the first coordinate.
pub fn gen_prize(coords: &CoordinateSet, mode: PrizeMode) -> Vec<Prize> {
    match mode {
        PrizeMode::One => coords.labels.iter().map(|_| 1).collect(),
        PrizeMode::Mod => coords.labels.iter().map(|&i| 1 + (7141 * i + 73) % 100).collect(),
        PrizeMode::Dist => {
            let n = coords.len();
            let theta = (0..n).map(|j| coords.distance(0, j)).fold(0.0, f64::max);
            (0..n)
                .map(|j| {
                    if theta == 0.0 {
                        1
                    } else {
                        1 + libm::floor(99.0 * coords.distance(0, j) / theta) as Prize
                    }
                })
                .collect()
        }
    }
}
