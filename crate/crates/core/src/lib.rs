//! Prize-collecting travelling salesperson (PCTSP) on sparse graphs with
//! non-metric costs.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! clocks or the terminal lives in the `pctsp` companion crate; time limits
//! reach the exact solver through the [`exact::Clock`] trait.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exact;
pub mod graph;
pub mod heuristics;
pub mod instances;
pub mod metric;
pub mod oracle;
pub mod paths;
pub mod preprocess;
pub mod tour;

#[cfg(test)]
pub(crate) mod testing;

pub use error::GraphError;
pub use graph::{Cost, ExtCost, Instance, InstanceMeta, Prize, SparseGraph, VertexId};
pub use tour::Tour;
