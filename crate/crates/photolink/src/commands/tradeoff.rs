use std::path::Path;

use photolink_core::tradeoff::{tradeoff_point, TradeoffPoint};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::output::{num, write_csv};

pub const HEADER: [&str; 5] = [
    "responsivity_A_per_W",
    "P0_X_W",
    "N_opt",
    "eps_QNL",
    "N_qubit",
];

fn row(p: &TradeoffPoint) -> [String; 5] {
    [
        num(p.responsivity),
        num(p.optical_power_x),
        num(p.photons_per_gate),
        num(p.gate_error),
        p.n_qubit.to_string(),
    ]
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<()> {
    let pd = cfg.section(&cfg.photodiode, "photodiode")?.build()?;
    let env = cfg.section(&cfg.environment, "environment")?.build()?;
    let q = cfg.section(&cfg.qubit, "qubit")?.build()?;
    let sweep = cfg.section(&cfg.sweep, "sweep")?;
    let points = sweep
        .values()?
        .into_iter()
        .map(|r| tradeoff_point(&q, &env, pd.wavelength, r))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::core("tradeoff", e))?;
    write_csv(out, &HEADER, points.iter().map(row))?;

    let markers: Vec<&TradeoffPoint> = points
        .iter()
        .filter(|p| sweep.markers.contains(&p.responsivity))
        .collect();
    if !markers.is_empty() {
        println!("{}", HEADER.join(","));
        for p in markers {
            println!("{}", row(p).join(","));
        }
    }
    Ok(())
}
