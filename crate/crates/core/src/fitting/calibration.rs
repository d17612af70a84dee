//! Square-law detector calibration and symmetric insertion-loss splitting.

use crate::error::{domain, Result, Warning};

/// Upper end of the square-law range when the calibration record has none:
/// −20 dBm.
pub const DEFAULT_SQUARE_LAW_MAX_POWER: f64 = 1e-5;

/// Voltage sensitivity of a zero-bias diode detector.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectorCalibration {
    /// \[V/W\]
    pub sensitivity: f64,
    /// One-sigma uncertainty of `sensitivity` \[V/W\].
    pub sensitivity_sigma: f64,
    /// \[Hz\]
    pub frequency: f64,
    /// \[K\]
    pub temperature: f64,
    /// \[W\]
    pub square_law_max_power: f64,
}

impl DetectorCalibration {
    pub fn new(
        sensitivity: f64,
        sensitivity_sigma: f64,
        frequency: f64,
        temperature: f64,
    ) -> Result<Self> {
        if !(sensitivity > 0.0) {
            return domain("sensitivity", "must be positive");
        }
        if !(sensitivity_sigma >= 0.0) {
            return domain("sensitivity_sigma", "must be non-negative");
        }
        Ok(Self {
            sensitivity,
            sensitivity_sigma,
            frequency,
            temperature,
            square_law_max_power: DEFAULT_SQUARE_LAW_MAX_POWER,
        })
    }

    pub fn with_square_law_max_power(mut self, power: f64) -> Result<Self> {
        if !(power > 0.0) {
            return domain("square_law_max_power", "must be positive");
        }
        self.square_law_max_power = power;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DetectorReading {
    /// \[W\]
    pub power: f64,
    /// Propagated from the sensitivity uncertainty \[W\].
    pub sigma: f64,
    pub warning: Option<Warning>,
}

/// RF power V/𝒮 for a detector voltage; flags readings beyond the
/// square-law range.
pub fn detector_power(voltage: f64, cal: &DetectorCalibration) -> Result<DetectorReading> {
    if !(voltage >= 0.0) {
        return domain("voltage", "must be non-negative");
    }
    let power = voltage / cal.sensitivity;
    Ok(DetectorReading {
        power,
        sigma: power * cal.sensitivity_sigma / cal.sensitivity,
        warning: (power > cal.square_law_max_power).then_some(Warning::DetectorSaturated),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SymmetricLoss {
    pub db: f64,
    pub warning: Option<Warning>,
}

/// Loss at the midpoint of a chain built from identical halves: half the
/// total, in dB.
pub fn symmetric_insertion_loss(total_loss_db: f64) -> SymmetricLoss {
    SymmetricLoss {
        db: total_loss_db / 2.0,
        warning: (total_loss_db > 0.0).then_some(Warning::GainInPassiveChain),
    }
}
