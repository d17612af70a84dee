//! Optical-to-electrical link physics: intensity modulation, photodiode
//! responsivity, generated RF power, power efficiency and the shot/thermal
//! current-noise comparison that defines an effective photon occupation.
//!
//! Current power spectral densities are stored double-sided in A²/Hz. Use
//! [`single_sided`] when a one-sided density is needed.

use core::f64::consts::PI;

use crate::error::{domain, Result};
use crate::math;
use crate::units::{photon_energy, BOLTZMANN, ELECTRON_CHARGE, PLANCK, SPEED_OF_LIGHT};

/// Modulation depth used when none is given: a null-biased modulator whose
/// two equal first-order sidebands give full-depth intensity modulation.
pub const DEFAULT_MODULATION_DEPTH: f64 = 1.0;

/// Photodiode parameters that set its responsivity.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhotodiodeSpec {
    /// η_q in \[0, 1\].
    pub quantum_efficiency: f64,
    /// Internal or external current gain G ≥ 0.
    pub gain: f64,
    /// Optical wavelength λ \[m\].
    pub wavelength: f64,
    /// 3 dB electrical bandwidth \[Hz\], if known.
    pub bandwidth_3db: Option<f64>,
}

impl PhotodiodeSpec {
    pub fn new(quantum_efficiency: f64, gain: f64, wavelength: f64) -> Result<Self> {
        let spec = Self {
            quantum_efficiency,
            gain,
            wavelength,
            bandwidth_3db: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_bandwidth(mut self, bandwidth_3db: f64) -> Result<Self> {
        if !(bandwidth_3db > 0.0) {
            return domain("bandwidth_3db", "must be positive");
        }
        self.bandwidth_3db = Some(bandwidth_3db);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.quantum_efficiency) {
            return domain("quantum_efficiency", "must lie in [0, 1]");
        }
        if !(self.gain >= 0.0) || !self.gain.is_finite() {
            return domain("gain", "must be finite and non-negative");
        }
        if !(self.wavelength > 0.0) || !self.wavelength.is_finite() {
            return domain("wavelength", "must be positive");
        }
        Ok(())
    }

    /// Optical carrier frequency c/λ \[Hz\].
    pub fn optical_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / self.wavelength
    }

    pub fn responsivity(&self) -> f64 {
        total_responsivity(self)
    }
}

/// Electrical and thermal environment of the photodiode.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkEnvironment {
    /// Load impedance Z₀ \[Ω\].
    pub impedance: f64,
    /// ε_m in \[−1, 1\].
    pub modulation_depth: f64,
    /// Stage temperature \[K\].
    pub stage_temperature: f64,
    /// Cooling power available at the stage \[W\].
    pub cooling_power: f64,
}

impl LinkEnvironment {
    pub fn new(
        impedance: f64,
        modulation_depth: f64,
        stage_temperature: f64,
        cooling_power: f64,
    ) -> Result<Self> {
        let env = Self {
            impedance,
            modulation_depth,
            stage_temperature,
            cooling_power,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.impedance > 0.0) || !self.impedance.is_finite() {
            return domain("impedance", "must be positive");
        }
        check_modulation(self.modulation_depth)?;
        if !(self.stage_temperature >= 0.0) {
            return domain("stage_temperature", "must be non-negative");
        }
        if !(self.cooling_power >= 0.0) {
            return domain("cooling_power", "must be non-negative");
        }
        Ok(())
    }
}

impl Default for LinkEnvironment {
    fn default() -> Self {
        Self {
            impedance: 50.0,
            modulation_depth: DEFAULT_MODULATION_DEPTH,
            stage_temperature: 4.0,
            cooling_power: 10e-6,
        }
    }
}

/// Shot and thermal noise at one RF frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseReport {
    /// Double-sided shot-noise current PSD \[A²/Hz\].
    pub shot_psd_ds: f64,
    /// Double-sided quantum thermal current PSD \[A²/Hz\].
    pub thermal_psd_ds: f64,
    /// Effective occupation equivalent to the shot noise.
    pub n_eff: f64,
    /// Bose–Einstein occupation of the environment.
    pub n_thermal: f64,
}

impl NoiseReport {
    pub fn evaluate(
        responsivity: f64,
        optical_power: f64,
        frequency: f64,
        env: &LinkEnvironment,
    ) -> Result<Self> {
        Ok(Self {
            shot_psd_ds: shot_noise_psd_ds(responsivity, optical_power),
            thermal_psd_ds: thermal_noise_psd_ds(env.stage_temperature, frequency, env.impedance)?,
            n_eff: n_eff_shot(responsivity, optical_power, env.impedance, frequency)?,
            n_thermal: bose_einstein(env.stage_temperature, frequency)?,
        })
    }

    pub fn shot_psd_ss(&self) -> f64 {
        single_sided(self.shot_psd_ds)
    }

    pub fn thermal_psd_ss(&self) -> f64 {
        single_sided(self.thermal_psd_ds)
    }
}

/// One-sided view of a double-sided density.
pub fn single_sided(psd_ds: f64) -> f64 {
    2.0 * psd_ds
}

fn check_modulation(depth: f64) -> Result<()> {
    if !(depth.abs() <= 1.0) {
        return domain("modulation_depth", "|ε_m| must not exceed 1");
    }
    Ok(())
}

/// Intensity-modulated optical power P₀(1 + ε_m cos 2πf t) \[W\].
pub fn instantaneous_optical_power(
    mean_power: f64,
    modulation_depth: f64,
    modulation_frequency: f64,
    t: f64,
) -> Result<f64> {
    check_modulation(modulation_depth)?;
    if !(mean_power >= 0.0) {
        return domain("mean_power", "must be non-negative");
    }
    let phase = 2.0 * PI * modulation_frequency * t;
    Ok(mean_power * (1.0 + modulation_depth * math::cos(phase)))
}

/// Responsivity e₀λ/(hc) of a detector that turns every photon into one
/// carrier \[A/W\].
pub fn quantum_responsivity(wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return domain("wavelength", "must be positive");
    }
    Ok(ELECTRON_CHARGE * wavelength / (PLANCK * SPEED_OF_LIGHT))
}

/// G·η_q·e₀λ/(hc) \[A/W\].
pub fn total_responsivity(pd: &PhotodiodeSpec) -> f64 {
    pd.gain * pd.quantum_efficiency * ELECTRON_CHARGE * pd.wavelength / (PLANCK * SPEED_OF_LIGHT)
}

/// Average RF power ½·𝓡²·P₀²·ε_m²·Z₀ delivered at the modulation frequency
/// \[W\].
pub fn microwave_power(
    responsivity: f64,
    optical_power: f64,
    modulation_depth: f64,
    impedance: f64,
) -> f64 {
    0.5 * responsivity
        * responsivity
        * optical_power
        * optical_power
        * modulation_depth
        * modulation_depth
        * impedance
}

/// RF output over optical input, ½·𝓡²·ε_m²·Z₀·P₀.
pub fn power_efficiency(
    responsivity: f64,
    optical_power: f64,
    modulation_depth: f64,
    impedance: f64,
) -> Result<f64> {
    if !(optical_power > 0.0) {
        return domain("optical_power", "must be positive");
    }
    Ok(microwave_power(responsivity, optical_power, modulation_depth, impedance) / optical_power)
}

/// The same efficiency expressed through the added shot noise:
/// η_q·ε_m²·(f_RF/f_opt)·n_eff. Holds for unity-gain detectors.
pub fn power_efficiency_via_noise(
    quantum_efficiency: f64,
    modulation_depth: f64,
    rf_frequency: f64,
    optical_frequency: f64,
    n_eff: f64,
) -> Result<f64> {
    if !(optical_frequency > 0.0) {
        return domain("optical_frequency", "must be positive");
    }
    Ok(quantum_efficiency
        * modulation_depth
        * modulation_depth
        * (rf_frequency / optical_frequency)
        * n_eff)
}

/// Double-sided shot-noise current PSD e₀·𝓡·P₀ \[A²/Hz\].
pub fn shot_noise_psd_ds(responsivity: f64, optical_power: f64) -> f64 {
    ELECTRON_CHARGE * responsivity * optical_power
}

/// Bose–Einstein occupation 1/(exp(hf/k_BT) − 1). Zero at T = 0.
pub fn bose_einstein(temperature: f64, frequency: f64) -> Result<f64> {
    if !(frequency > 0.0) {
        return domain("frequency", "must be positive");
    }
    if !(temperature >= 0.0) {
        return domain("temperature", "must be non-negative");
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = photon_energy(frequency) / (BOLTZMANN * temperature);
    Ok(1.0 / math::expm1(x))
}

/// Double-sided quantum thermal current PSD ħΩ(1 + 2⟨n⟩)/Z₀ \[A²/Hz\].
pub fn thermal_noise_psd_ds(temperature: f64, frequency: f64, impedance: f64) -> Result<f64> {
    if !(impedance > 0.0) {
        return domain("impedance", "must be positive");
    }
    let n = bose_einstein(temperature, frequency)?;
    Ok(photon_energy(frequency) * (1.0 + 2.0 * n) / impedance)
}

/// Thermal occupation whose current noise matches the shot noise,
/// ½·e₀𝓡P₀Z₀/(ħΩ).
pub fn n_eff_shot(
    responsivity: f64,
    optical_power: f64,
    impedance: f64,
    frequency: f64,
) -> Result<f64> {
    if !(frequency > 0.0) {
        return domain("frequency", "must be positive");
    }
    Ok(0.5 * shot_noise_psd_ds(responsivity, optical_power) * impedance / photon_energy(frequency))
}
