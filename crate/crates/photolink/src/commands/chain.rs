use std::path::Path;

use photolink_core::rfchain::{
    backout_mixer_noise_factor, cascade_gain, friis_total, ChainStage, SnrBudget,
};
use photolink_core::units::{from_db, to_db};

use crate::config::{ChainConfig, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::output::{num, write_csv};

pub const HEADER: [&str; 3] = ["quantity", "value", "unit"];

fn db(x: f64) -> Result<f64> {
    to_db(x)
        .map(|d| d.value())
        .map_err(|e| CliError::core("chain", e))
}

/// Index of the one stage with an unknown gain or noise figure, if any.
fn unknown_stage(chain: &ChainConfig) -> Result<Option<usize>> {
    let open: Vec<usize> = (0..chain.stages.len())
        .filter(|&i| chain.stages[i].gain_db.is_none() || chain.stages[i].nf_db.is_none())
        .collect();
    match open.as_slice() {
        [] => Ok(None),
        [k] => Ok(Some(*k)),
        _ => Err(CliError::validation(
            "chain: at most one stage may leave gain_db or nf_db null",
        )),
    }
}

fn partial(stages: &[ChainStage]) -> Result<(f64, f64)> {
    if stages.is_empty() {
        return Ok((1.0, 1.0));
    }
    let f = friis_total(stages).map_err(|e| CliError::core("chain", e))?;
    Ok((f, cascade_gain(stages)))
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<()> {
    let chain = cfg.section(&cfg.chain, "chain")?;
    if chain.stages.is_empty() {
        return Err(CliError::validation("chain: `stages` is empty"));
    }
    let mut rows: Vec<[String; 3]> = Vec::new();
    let mut push =
        |q: &str, v: f64, unit: &str| rows.push([q.to_string(), num(v), unit.to_string()]);

    let budget = chain
        .budget
        .map(|b| {
            SnrBudget::evaluate(
                b.signal_power,
                b.responsivity,
                b.optical_power,
                b.impedance,
                b.temperature,
                b.bandwidth,
            )
        })
        .transpose()
        .map_err(|e| CliError::core("chain.budget", e))?;
    let snr_in = budget
        .map(|b| b.snr())
        .transpose()
        .map_err(|e| CliError::core("chain.budget", e))?;
    let total_f = match (chain.total_noise_factor, chain.snr_out, snr_in) {
        (Some(_), Some(_), _) => {
            return Err(CliError::validation(
                "chain: give either `total_noise_factor` or `snr_out`, not both",
            ))
        }
        (Some(f), None, _) => Some(f),
        (None, Some(out), Some(inp)) => Some(inp / out),
        (None, Some(_), None) => {
            return Err(CliError::validation(
                "chain: `snr_out` needs a `budget` section",
            ))
        }
        (None, None, _) => None,
    };

    let k = unknown_stage(chain)?;
    let gain_k = match k {
        Some(k) if chain.stages[k].gain_db.is_none() => {
            let g = chain.total_gain.ok_or_else(|| {
                CliError::validation("chain: `total_gain` is needed to solve a stage gain")
            })?;
            let others: f64 = (chain.stages.iter().enumerate())
                .filter(|&(i, _)| i != k)
                .map(|(_, s)| from_db(s.gain_db.unwrap_or(0.0)))
                .product();
            Some(g / others)
        }
        Some(k) => chain.stages[k].gain_db.map(from_db),
        None => None,
    };
    let stage = |i: usize, nf: f64| -> Result<ChainStage> {
        let s = &chain.stages[i];
        let g = if Some(i) == k {
            gain_k.unwrap_or(1.0)
        } else {
            from_db(s.gain_db.unwrap_or(0.0))
        };
        ChainStage::new(s.label.clone(), g, nf)
            .map_err(|e| CliError::core(&format!("chain.stages[{i}]"), e))
    };
    let nf_of = |i: usize| from_db(chain.stages[i].nf_db.unwrap_or(0.0));

    let mut stages = Vec::with_capacity(chain.stages.len());
    let mut solved_nf = None;
    if let Some(k) = k {
        let front = (0..k)
            .map(|i| stage(i, nf_of(i)))
            .collect::<Result<Vec<_>>>()?;
        let back = (k + 1..chain.stages.len())
            .map(|i| stage(i, nf_of(i)))
            .collect::<Result<Vec<_>>>()?;
        let nf_k = match chain.stages[k].nf_db {
            Some(nf) => from_db(nf),
            None => {
                let total = total_f.ok_or_else(|| {
                    CliError::validation("chain: `total_noise_factor` or `snr_out` is needed to solve a stage noise figure")
                })?;
                let (f_front, g_front) = partial(&front)?;
                let (f_back, _) = partial(&back)?;
                let f = backout_mixer_noise_factor(
                    total,
                    f_front,
                    g_front,
                    f_back,
                    gain_k.unwrap_or(1.0),
                )
                .map_err(|e| CliError::core("chain", e))?;
                solved_nf = Some(f);
                f
            }
        };
        stages.extend(front);
        stages.push(stage(k, nf_k)?);
        stages.extend(back);
    } else {
        stages = (0..chain.stages.len())
            .map(|i| stage(i, nf_of(i)))
            .collect::<Result<Vec<_>>>()?;
    }

    for s in &stages {
        push(&format!("{}_gain", s.label), db(s.gain_linear)?, "dB");
        push(
            &format!("{}_noise_figure", s.label),
            db(s.noise_factor_linear)?,
            "dB",
        );
    }
    if let (Some(k), Some(g)) = (k, gain_k) {
        push(&format!("{}_gain_linear", chain.stages[k].label), g, "1");
    }
    if let (Some(k), Some(f)) = (k, solved_nf) {
        push(&format!("{}_noise_factor", chain.stages[k].label), f, "1");
    }
    let f_tot = friis_total(&stages).map_err(|e| CliError::core("chain", e))?;
    push("total_gain", db(cascade_gain(&stages))?, "dB");
    push("total_noise_factor", f_tot, "1");
    push("total_noise_figure", db(f_tot)?, "dB");
    if let Some(b) = budget {
        push("signal_power", b.signal_power, "W");
        push("shot_power", b.shot_power, "W");
        push("thermal_power", b.thermal_power, "W");
        push("bandwidth", b.bandwidth, "Hz");
    }
    if let Some(s) = snr_in {
        push("snr_in", s, "1");
        push("snr_in_db", db(s)?, "dB");
    }
    write_csv(out, &HEADER, rows)
}
