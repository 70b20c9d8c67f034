//! Multi-threaded emulation. Every run draws from its own generator stream,
//! so the result is identical to the sequential driver for any thread count.

use qwalk::emulator::{DeadTimeStats, Emulator, EmulatorConfig, Simulation};
use qwalk::Result;
use rayon::prelude::*;

pub fn simulate_runs_parallel(config: EmulatorConfig) -> Result<Simulation> {
    let emulator = Emulator::new(config)?;
    let runs: Vec<_> = (0..emulator.config().runs)
        .into_par_iter()
        .map(|run_id| emulator.run(run_id))
        .collect();
    let mut clicks = Vec::new();
    let mut dead_time = DeadTimeStats::default();
    for (c, s) in runs {
        clicks.extend(c);
        dead_time.merge(s);
    }
    Ok(Simulation { clicks, dead_time })
}
