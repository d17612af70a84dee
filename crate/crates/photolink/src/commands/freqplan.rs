use std::path::Path;

use photolink_core::freqplan::{
    modulation_range, plan_spectroscopy_with_carrier, slfi_plan, spur_check, Hz, MixPlan,
    DEFAULT_GUARD, DEFAULT_MAX_HARMONIC, DEFAULT_OPTICAL_CARRIER, WR10_BAND, WR10_CUTOFF,
};
use serde::Serialize;

use crate::config::{hz, ScenarioConfig, SlfiConfig, SpectroscopyConfig};
use crate::error::{CliError, Result};
use crate::output::write_json;

#[derive(Serialize)]
struct SpectroscopyReport {
    plan: MixPlan,
    /// The LO as an exact fraction, for when it is not a whole hertz.
    lo_exact: String,
    /// Modulation span covering WR10 at this sideband order.
    modulation_range: (Hz, Hz),
    max_harmonic: u32,
    guard: Hz,
    spurs: Vec<photolink_core::freqplan::SpurHit>,
}

#[derive(Serialize)]
struct SlfiRow {
    target: Hz,
    lo: Hz,
    modulation: Hz,
    output: Hz,
}

#[derive(Serialize)]
struct SlfiReport {
    if_drive: Hz,
    plans: Vec<SlfiRow>,
}

#[derive(Serialize)]
struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    spectroscopy: Option<SpectroscopyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slfi: Option<SlfiReport>,
}

fn ghz(f: Hz) -> String {
    format!("{:.4} GHz", f.to_f64() / 1e9)
}

fn spectroscopy(s: &SpectroscopyConfig) -> Result<SpectroscopyReport> {
    let cutoff = s
        .cutoff
        .map(|c| hz(c, "plan.spectroscopy.cutoff"))
        .transpose()?
        .unwrap_or(WR10_CUTOFF);
    let carrier = s
        .carrier
        .map(|c| hz(c, "plan.spectroscopy.carrier"))
        .transpose()?
        .unwrap_or(DEFAULT_OPTICAL_CARRIER);
    let guard = s
        .guard
        .map(|g| hz(g, "plan.spectroscopy.guard"))
        .transpose()?
        .unwrap_or(DEFAULT_GUARD);
    let max_harmonic = s
        .max_harmonic
        .unwrap_or(DEFAULT_MAX_HARMONIC.max(s.harmonic));
    let plan = plan_spectroscopy_with_carrier(
        hz(s.rf, "plan.spectroscopy.rf")?,
        s.harmonic,
        hz(s.intermediate, "plan.spectroscopy.intermediate")?,
        cutoff,
        s.sideband_order,
        carrier,
    )
    .map_err(|e| CliError::core("plan.spectroscopy", e))?;
    let range = modulation_range(WR10_BAND, s.sideband_order)
        .map_err(|e| CliError::core("plan.spectroscopy", e))?;
    Ok(SpectroscopyReport {
        lo_exact: plan.lo.to_string(),
        spurs: spur_check(&plan, max_harmonic, guard),
        modulation_range: range,
        max_harmonic,
        guard,
        plan,
    })
}

fn slfi(s: &SlfiConfig) -> Result<SlfiReport> {
    let if_drive = hz(s.if_drive, "plan.slfi.if_drive")?;
    let plans = s
        .targets
        .iter()
        .map(|&t| {
            let plan = slfi_plan(hz(t, "plan.slfi.targets")?, if_drive)
                .map_err(|e| CliError::core("plan.slfi", e))?;
            Ok(SlfiRow {
                target: plan.rf,
                lo: plan.lo,
                modulation: plan.modulation,
                output: plan.intermediate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SlfiReport { if_drive, plans })
}

fn print_table(report: &Report) {
    if let Some(s) = &report.spectroscopy {
        let p = &s.plan;
        println!("{:<22}{}", "rf", ghz(p.rf));
        println!("{:<22}{}", "harmonic", p.harmonic);
        println!("{:<22}{}", "intermediate", ghz(p.intermediate));
        println!("{:<22}{} ({})", "lo", ghz(p.lo), s.lo_exact);
        println!("{:<22}{}", "modulation", ghz(p.modulation));
        println!(
            "{:<22}{} .. {}",
            "modulation_range",
            ghz(s.modulation_range.0),
            ghz(s.modulation_range.1)
        );
        println!("{:<22}{}", "cutoff", ghz(p.cutoff));
        let tones: Vec<String> = p
            .propagating_tones
            .iter()
            .map(|t| format!("{} ({})", t.origin, ghz(t.frequency)))
            .collect();
        println!("{:<22}{}", "propagating", tones.join(", "));
        match p.spur_margin {
            Some(m) => println!("{:<22}{}", "spur_margin", ghz(m)),
            None => println!("{:<22}none", "spur_margin"),
        }
        println!("{:<22}{}", "spurs_in_guard", s.spurs.len());
    }
    if let Some(s) = &report.slfi {
        println!(
            "{:>14} {:>14} {:>14} {:>14}",
            "target", "lo", "modulation", "output"
        );
        for r in &s.plans {
            println!(
                "{:>14} {:>14} {:>14} {:>14}",
                ghz(r.target),
                ghz(r.lo),
                ghz(r.modulation),
                ghz(r.output)
            );
        }
    }
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<()> {
    let plan = cfg.section(&cfg.plan, "plan")?;
    if plan.spectroscopy.is_none() && plan.slfi.is_none() {
        return Err(CliError::validation(
            "plan: give `spectroscopy`, `slfi` or both",
        ));
    }
    let report = Report {
        spectroscopy: plan.spectroscopy.as_ref().map(spectroscopy).transpose()?,
        slfi: plan.slfi.as_ref().map(slfi).transpose()?,
    };
    write_json(out, &report)?;
    print_table(&report);
    Ok(())
}
