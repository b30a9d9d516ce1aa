//! File formats, the benchmark runner and the `pctsp` command line on top
//! of `pctsp-core`.

pub mod cli;
pub mod clock;
pub mod json;
pub mod manifest;
pub mod records;
pub mod runner;
pub mod tsplib;
