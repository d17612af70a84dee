//! Efficiency–noise trade-off for optically driven qubit gates.
//!
//! A higher detector responsivity lowers the optical power an X gate needs,
//! which lets more drive lines share a fixed cooling budget, but it also
//! lowers the number of photons per pulse and so raises the
//! quantum-noise-limited gate error ε = (π/2)²/N.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};
use crate::linkmodel::LinkEnvironment;
use crate::math;
use crate::units::{PLANCK, REDUCED_PLANCK, SPEED_OF_LIGHT};

/// Default responsivity grid for [`sweep_responsivity`] \[A/W\].
pub const DEFAULT_SWEEP_RANGE: (f64, f64) = (0.1, 1000.0);
pub const DEFAULT_SWEEP_POINTS: usize = 200;

/// Capacitive XY drive of a transmon.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QubitDriveSpec {
    /// Drive-line coupling capacitance C_xy \[F\].
    pub coupling_capacitance: f64,
    /// Total qubit capacitance C_Σ \[F\].
    pub total_capacitance: f64,
    /// Qubit transition frequency \[Hz\].
    pub qubit_frequency: f64,
    /// Rectangular gate duration \[s\].
    pub gate_duration: f64,
}

impl QubitDriveSpec {
    pub fn new(
        coupling_capacitance: f64,
        total_capacitance: f64,
        qubit_frequency: f64,
        gate_duration: f64,
    ) -> Result<Self> {
        let q = Self {
            coupling_capacitance,
            total_capacitance,
            qubit_frequency,
            gate_duration,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coupling_capacitance > 0.0) {
            return domain("coupling_capacitance", "must be positive");
        }
        if !(self.coupling_capacitance < self.total_capacitance) {
            return domain(
                "coupling_capacitance",
                "must be below the total capacitance",
            );
        }
        if !(self.qubit_frequency > 0.0) {
            return domain("qubit_frequency", "must be positive");
        }
        if !(self.gate_duration > 0.0) {
            return domain("gate_duration", "must be positive");
        }
        Ok(())
    }

    /// Transmon impedance 1/(2πf_q·C_Σ) \[Ω\].
    pub fn qubit_impedance(&self) -> f64 {
        1.0 / (2.0 * PI * self.qubit_frequency * self.total_capacitance)
    }

    /// Zero-point charge √(ħ/2Z_q) \[C\].
    pub fn zero_point_charge(&self) -> f64 {
        math::sqrt(REDUCED_PLANCK / (2.0 * self.qubit_impedance()))
    }

    /// Drive voltage amplitude for a π rotation in one gate time \[V\].
    pub fn pi_voltage(&self) -> f64 {
        PI / (rabi_per_volt(self) * self.gate_duration)
    }
}

/// One row of the trade-off sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TradeoffPoint {
    /// \[A/W\]
    pub responsivity: f64,
    /// Optical power for one X gate \[W\].
    pub optical_power_x: f64,
    /// Optical photons in one gate pulse.
    pub photons_per_gate: f64,
    /// Quantum-noise-limited gate error.
    pub gate_error: f64,
    /// Drive lines supported by the cooling budget.
    pub n_qubit: u64,
}

/// Rabi rate per drive volt, (C_xy/C_Σ)·Q_zp/ħ \[rad/(s·V)\].
pub fn rabi_per_volt(q: &QubitDriveSpec) -> f64 {
    (q.coupling_capacitance / q.total_capacitance) * q.zero_point_charge() / REDUCED_PLANCK
}

/// Mean optical power (π/(Ω̃_R·Δt))/(𝓡·Z₀) that drives a π pulse, assuming
/// full modulation depth \[W\].
pub fn optical_power_for_x_gate(
    q: &QubitDriveSpec,
    responsivity: f64,
    impedance: f64,
) -> Result<f64> {
    if !(responsivity > 0.0) {
        return domain("responsivity", "must be positive");
    }
    if !(impedance > 0.0) {
        return domain("impedance", "must be positive");
    }
    Ok(q.pi_voltage() / (responsivity * impedance))
}

/// Number of optical photons P₀·Δt·λ/(hc) in a pulse.
pub fn photons_in_pulse(optical_power: f64, duration: f64, wavelength: f64) -> f64 {
    optical_power * duration * wavelength / (PLANCK * SPEED_OF_LIGHT)
}

/// Gate error (π/2)²/N for a pulse of N coherent photons.
pub fn gate_error_qnl(photons: f64) -> Result<f64> {
    if !(photons > 0.0) {
        return domain("photons", "must be positive");
    }
    Ok(FRAC_PI_2 * FRAC_PI_2 / photons)
}

/// ⌊P_cool / P_op⌋ drive lines.
pub fn n_qubit(cooling_power: f64, power_per_op: f64) -> Result<u64> {
    if !(power_per_op > 0.0) {
        return domain("power_per_op", "must be positive");
    }
    if !(cooling_power >= 0.0) {
        return domain("cooling_power", "must be non-negative");
    }
    Ok(math::floor(cooling_power / power_per_op) as u64)
}

/// Dilution-refrigerator cooling power, quadratic in stage temperature.
pub fn cooling_power_at(
    temperature: f64,
    reference_power: f64,
    reference_temperature: f64,
) -> Result<f64> {
    if !(reference_temperature > 0.0) {
        return domain("reference_temperature", "must be positive");
    }
    let ratio = temperature / reference_temperature;
    Ok(reference_power * ratio * ratio)
}

/// Evaluates one trade-off point. The X-gate power is divided by |ε_m| from
/// `env`, which is a no-op at the default full depth.
pub fn tradeoff_point(
    q: &QubitDriveSpec,
    env: &LinkEnvironment,
    wavelength: f64,
    responsivity: f64,
) -> Result<TradeoffPoint> {
    if env.modulation_depth == 0.0 {
        return domain("modulation_depth", "must be non-zero to drive a gate");
    }
    let p_x =
        optical_power_for_x_gate(q, responsivity, env.impedance)? / env.modulation_depth.abs();
    let photons = photons_in_pulse(p_x, q.gate_duration, wavelength);
    Ok(TradeoffPoint {
        responsivity,
        optical_power_x: p_x,
        photons_per_gate: photons,
        gate_error: gate_error_qnl(photons)?,
        n_qubit: n_qubit(env.cooling_power, p_x)?,
    })
}

/// Responsivity grid, linear or logarithmic, including both endpoints.
pub fn responsivity_grid(
    range: (f64, f64),
    n_points: usize,
    log_spacing: bool,
) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return domain("range", "need 0 < start < stop");
    }
    if n_points < 2 {
        return domain("n_points", "need at least two points");
    }
    let last = (n_points - 1) as f64;
    let grid = (0..n_points)
        .map(|i| {
            let t = i as f64 / last;
            if i == n_points - 1 {
                hi
            } else if log_spacing {
                lo * math::powf(hi / lo, t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect();
    Ok(grid)
}

/// Sweeps responsivity over `range` and evaluates the trade-off at each
/// grid point. Gate error rises and X-gate power falls along the grid.
pub fn sweep_responsivity(
    q: &QubitDriveSpec,
    env: &LinkEnvironment,
    wavelength: f64,
    range: (f64, f64),
    n_points: usize,
    log_spacing: bool,
) -> Result<Vec<TradeoffPoint>> {
    q.validate()?;
    env.validate()?;
    if !(wavelength > 0.0) {
        return domain("wavelength", "must be positive");
    }
    responsivity_grid(range, n_points, log_spacing)?
        .into_iter()
        .map(|r| tradeoff_point(q, env, wavelength, r))
        .collect()
}
