//! Physical constants and power-decibel arithmetic.

use core::f64::consts::PI;

use crate::error::{domain, Result};
use crate::math;

/// Elementary charge e₀ \[C\].
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant ħ \[J·s\].
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;
/// Planck constant h = 2πħ \[J·s\].
pub const PLANCK: f64 = 2.0 * PI * REDUCED_PLANCK;
/// Boltzmann constant k_B \[J/K\].
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light in vacuum \[m/s\].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// The constants above bundled as a value, for callers that want to pass
/// them around or print them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhysicalConstants {
    pub electron_charge: f64,
    pub reduced_planck: f64,
    pub planck: f64,
    pub boltzmann: f64,
    pub speed_of_light: f64,
}

impl PhysicalConstants {
    pub const CODATA: Self = Self {
        electron_charge: ELECTRON_CHARGE,
        reduced_planck: REDUCED_PLANCK,
        planck: PLANCK,
        boltzmann: BOLTZMANN,
        speed_of_light: SPEED_OF_LIGHT,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// A power ratio in decibels (10·log₁₀).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Decibel(pub f64);

impl Decibel {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_linear(self) -> f64 {
        math::powf(10.0, self.0 / 10.0)
    }
}

impl core::fmt::Display for Decibel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} dB", self.0)
    }
}

/// Converts a linear power ratio to decibels.
pub fn to_db(linear_power_ratio: f64) -> Result<Decibel> {
    if !(linear_power_ratio > 0.0) || !linear_power_ratio.is_finite() {
        return domain("linear_power_ratio", "must be positive and finite");
    }
    Ok(Decibel(10.0 * math::log10(linear_power_ratio)))
}

/// Converts decibels to a linear power ratio.
pub fn from_db(db: f64) -> f64 {
    Decibel(db).to_linear()
}

/// Angular frequency 2πf \[rad/s\] for an ordinary frequency in Hz.
pub fn angular(f: f64) -> f64 {
    2.0 * PI * f
}

/// Photon energy ħ·2πf = h·f \[J\].
pub fn photon_energy(f: f64) -> f64 {
    REDUCED_PLANCK * angular(f)
}

/// Optical frequency c/λ \[Hz\].
pub fn optical_frequency(wavelength: f64) -> f64 {
    SPEED_OF_LIGHT / wavelength
}
