//! Measurement reduction: quadratic power and noise fits, the
//! asymmetric-Lorentzian resonator fit, and detector calibration helpers.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};

mod calibration;
mod linear;
mod lm;
mod resonator;

pub use calibration::{
    detector_power, symmetric_insertion_loss, DetectorCalibration, DetectorReading, SymmetricLoss,
    DEFAULT_SQUARE_LAW_MAX_POWER,
};
pub use linear::{fit_half_quadratic, fit_quadratic_offset, HalfQuadraticFit, QuadraticOffsetFit};
pub use resonator::{
    fit_resonator, fit_resonator_with, resonator_model, ResonatorFit, ResonatorGuess,
    ResonatorOptions, TraceKind, Weighting, RESONATOR_PARAMS,
};

/// A value with its one-sigma uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub sigma: f64,
}

/// One sample of a measured curve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XYPoint {
    pub x: f64,
    pub y: f64,
    pub sigma: Option<f64>,
}

/// Samples sorted by strictly increasing `x`. Either every point carries a
/// positive `sigma` or none does.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct XYSeries {
    points: Vec<XYPoint>,
}

impl XYSeries {
    pub fn new(mut points: Vec<XYPoint>) -> Result<Self> {
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return domain("points", "coordinates must be finite");
        }
        let with_sigma = points.iter().filter(|p| p.sigma.is_some()).count();
        if with_sigma != 0 && with_sigma != points.len() {
            return domain("sigma", "give an uncertainty for every point or for none");
        }
        if points
            .iter()
            .filter_map(|p| p.sigma)
            .any(|s| !(s > 0.0) || !s.is_finite())
        {
            return domain("sigma", "must be positive and finite");
        }
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
        if points.windows(2).any(|w| w[0].x == w[1].x) {
            return Err(Error::DegenerateFit("repeated x values"));
        }
        Ok(Self { points })
    }

    pub fn from_xy(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return domain("y", "length differs from x");
        }
        Self::new(
            x.iter()
                .zip(y)
                .map(|(&x, &y)| XYPoint { x, y, sigma: None })
                .collect(),
        )
    }

    pub fn from_xy_sigma(x: &[f64], y: &[f64], sigma: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() != sigma.len() {
            return domain("sigma", "column lengths differ");
        }
        Self::new(
            x.iter()
                .zip(y)
                .zip(sigma)
                .map(|((&x, &y), &s)| XYPoint {
                    x,
                    y,
                    sigma: Some(s),
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[XYPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn has_sigma(&self) -> bool {
        self.points.first().is_some_and(|p| p.sigma.is_some())
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.x)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.y)
    }

    fn require(&self, n: usize, what: &'static str) -> Result<()> {
        if self.points.len() < n {
            return domain("data", what);
        }
        Ok(())
    }
}
