use std::path::Path;

use photolink_core::linkmodel::n_eff_shot;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::output::{num, write_csv};

pub const HEADER: [&str; 3] = ["P0_W", "n_eff_shot", "n_eff_excess_model"];

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<()> {
    let noise = cfg.section(&cfg.noise, "noise")?;
    let env = cfg.section(&cfg.environment, "environment")?.build()?;
    let powers = cfg.section(&cfg.sweep, "sweep")?.values()?;
    if powers[0] < 0.0 {
        return Err(CliError::validation(
            "sweep: optical powers must be non-negative",
        ));
    }
    let rows = powers
        .iter()
        .map(|&p0| {
            let shot = n_eff_shot(noise.responsivity, p0, env.impedance, noise.frequency)?;
            let excess = noise
                .excess
                .map_or(String::new(), |e| num(e.a * p0 * p0 + e.b));
            Ok([num(p0), num(shot), excess])
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::core("noise", e))?;
    write_csv(out, &HEADER, rows)
}
