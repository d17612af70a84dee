use std::path::Path;

use photolink_core::gatesim::{analytic_gate_error, BlockStats, GateErrorRun};
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::output::{num, write_csv};

pub const HEADER: [&str; 5] = [
    "N_target",
    "trials",
    "mean_error",
    "stderr",
    "analytic_eq10",
];

/// Row `i` uses seed `seed + i`. Blocks run in parallel and are merged in
/// block order, so the bytes do not depend on the thread count.
pub fn run(cfg: &ScenarioConfig, out: &Path, seed: Option<u64>) -> Result<()> {
    let sim = cfg.section(&cfg.gatesim, "gatesim")?;
    let seed = seed
        .or(cfg.seed)
        .ok_or_else(|| CliError::validation("gatesim: give `seed` in the config or --seed"))?;
    if sim.n_targets.is_empty() {
        return Err(CliError::validation("gatesim: `n_targets` is empty"));
    }
    let mut rows = Vec::with_capacity(sim.n_targets.len());
    for (i, &n) in sim.n_targets.iter().enumerate() {
        let row_seed = seed.wrapping_add(i as u64);
        let run = GateErrorRun::with_variance_scale(
            n,
            sim.trials,
            row_seed,
            sim.variance_scale.unwrap_or(1.0),
        )
        .map_err(|e| CliError::core("gatesim", e))?;
        let blocks: Vec<(u64, u64)> = run.blocks().collect();
        let stats: Vec<BlockStats> = blocks
            .par_iter()
            .map(|&(b, c)| run.run_block(b, c))
            .collect();
        let r = run.finish(stats);
        rows.push([
            num(n),
            r.trials.to_string(),
            num(r.mean_error),
            num(r.std_error_of_mean),
            num(analytic_gate_error(n)),
        ]);
    }
    write_csv(out, &HEADER, rows)
}
