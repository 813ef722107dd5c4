//! Shared inputs for the benchmarks.

use cellfree::{scenario::generate_scenario, Scenario, SimConfig};

/// Desk-scale scenario (M = 100, K = 25) for trial `trial`.
pub fn desk_scenario(trial: u64) -> (SimConfig, Scenario) {
    let cfg = SimConfig::desk_scale();
    let scn = generate_scenario(&cfg, trial);
    (cfg, scn)
}

/// Full-scale scenario (M = 400, K = 100).
pub fn full_scenario(trial: u64) -> (SimConfig, Scenario) {
    let cfg = SimConfig::default();
    let scn = generate_scenario(&cfg, trial);
    (cfg, scn)
}
