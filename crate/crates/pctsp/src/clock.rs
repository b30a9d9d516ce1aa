use std::time::Instant;

use pctsp_core::exact::Clock;

/// Wall-clock time since construction.
#[derive(Clone, Copy, Debug)]
pub struct StdClock {
    start: Instant,
}

impl StdClock {
    pub fn start() -> Self {
        StdClock { start: Instant::now() }
    }
}

impl Clock for StdClock {
    fn elapsed_secs(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}
