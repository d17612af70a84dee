//! JSON scenario files. Every struct rejects unknown keys; SI units unless
//! the key ends in `_db`.

use std::fs;
use std::path::{Path, PathBuf};

use photolink_core::freqplan::Hz;
use photolink_core::linkmodel::{LinkEnvironment, PhotodiodeSpec};
use photolink_core::tradeoff::QubitDriveSpec;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub photodiode: Option<PhotodiodeConfig>,
    pub environment: Option<EnvironmentConfig>,
    pub qubit: Option<QubitConfig>,
    pub sweep: Option<SweepConfig>,
    pub noise: Option<NoiseConfig>,
    pub chain: Option<ChainConfig>,
    pub gatesim: Option<GatesimConfig>,
    pub plan: Option<PlanConfig>,
    pub fit: Option<FitConfig>,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub path: PathBuf,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotodiodeConfig {
    pub quantum_efficiency: f64,
    pub gain: f64,
    /// \[m\]
    pub wavelength: f64,
    /// \[Hz\]
    #[serde(default)]
    pub bandwidth_3db: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub impedance: f64,
    pub modulation_depth: f64,
    pub stage_temperature: f64,
    pub cooling_power: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub coupling_capacitance: f64,
    pub total_capacitance: f64,
    pub qubit_frequency: f64,
    pub gate_duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Extra abscissae merged into the grid and echoed to stdout.
    #[serde(default)]
    pub markers: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcessNoise {
    /// \[photons/W²\]
    pub a: f64,
    /// \[photons\]
    pub b: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// \[A/W\]
    pub responsivity: f64,
    /// \[Hz\]
    pub frequency: f64,
    #[serde(default)]
    pub excess: Option<ExcessNoise>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub label: String,
    /// `null` marks the value to be solved for.
    pub gain_db: Option<f64>,
    pub nf_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub signal_power: f64,
    pub responsivity: f64,
    pub optical_power: f64,
    pub impedance: f64,
    pub temperature: f64,
    pub bandwidth: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub stages: Vec<StageConfig>,
    /// Linear end-to-end gain, needed when a stage gain is unknown.
    #[serde(default)]
    pub total_gain: Option<f64>,
    /// Linear end-to-end noise factor, needed when a stage NF is unknown.
    #[serde(default)]
    pub total_noise_factor: Option<f64>,
    /// Linear output SNR; with `budget` this yields the total noise factor.
    #[serde(default)]
    pub snr_out: Option<f64>,
    #[serde(default)]
    pub budget: Option<BudgetConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatesimConfig {
    pub n_targets: Vec<f64>,
    pub trials: u64,
    #[serde(default)]
    pub variance_scale: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectroscopyConfig {
    pub rf: f64,
    pub harmonic: u32,
    pub intermediate: f64,
    pub sideband_order: u32,
    #[serde(default)]
    pub cutoff: Option<f64>,
    #[serde(default)]
    pub carrier: Option<f64>,
    #[serde(default)]
    pub max_harmonic: Option<u32>,
    #[serde(default)]
    pub guard: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlfiConfig {
    pub if_drive: f64,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    #[serde(default)]
    pub spectroscopy: Option<SpectroscopyConfig>,
    #[serde(default)]
    pub slfi: Option<SlfiConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    HalfQuadratic,
    QuadraticOffset,
    Resonator,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorConfig {
    #[serde(default)]
    pub baseline: f64,
    #[serde(default)]
    pub trace: photolink_core::fitting::TraceKind,
    #[serde(default)]
    pub weighting: Option<photolink_core::fitting::Weighting>,
    #[serde(default)]
    pub guess: photolink_core::fitting::ResonatorGuess,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub model: FitModel,
    /// Data file, relative to the config file. `--data` overrides it.
    #[serde(default)]
    pub data: Option<PathBuf>,
    /// With `impedance`, turns a half-quadratic coefficient into an
    /// insertion loss \[A/W\].
    #[serde(default)]
    pub responsivity: Option<f64>,
    #[serde(default)]
    pub impedance: Option<f64>,
    #[serde(default)]
    pub resonator: Option<ResonatorConfig>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::parse(&text)
            .map_err(|e| CliError::Validation(format!("{}:{e}", path.display())))?;
        cfg.path = path.to_path_buf();
        Ok(cfg)
    }

    /// Parses a document; the error names line, column and key path.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            let path = e.path().to_string();
            format!("{}:{}: `{path}`: {inner}", inner.line(), inner.column())
        })
    }

    pub fn section<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T> {
        value.as_ref().ok_or_else(|| {
            CliError::validation(format!("{}: missing section `{name}`", self.path.display()))
        })
    }

    pub fn resolve(&self, relative: &Path) -> PathBuf {
        match self.path.parent() {
            Some(dir) if relative.is_relative() => dir.join(relative),
            _ => relative.to_path_buf(),
        }
    }
}

fn invalid(section: &str, err: photolink_core::Error) -> CliError {
    CliError::core(section, err)
}

impl PhotodiodeConfig {
    pub fn build(&self) -> Result<PhotodiodeSpec> {
        let pd = PhotodiodeSpec::new(self.quantum_efficiency, self.gain, self.wavelength)
            .map_err(|e| invalid("photodiode", e))?;
        match self.bandwidth_3db {
            Some(b) => pd.with_bandwidth(b).map_err(|e| invalid("photodiode", e)),
            None => Ok(pd),
        }
    }
}

impl EnvironmentConfig {
    pub fn build(&self) -> Result<LinkEnvironment> {
        LinkEnvironment::new(
            self.impedance,
            self.modulation_depth,
            self.stage_temperature,
            self.cooling_power,
        )
        .map_err(|e| invalid("environment", e))
    }
}

impl QubitConfig {
    pub fn build(&self) -> Result<QubitDriveSpec> {
        QubitDriveSpec::new(
            self.coupling_capacitance,
            self.total_capacitance,
            self.qubit_frequency,
            self.gate_duration,
        )
        .map_err(|e| invalid("qubit", e))
    }
}

impl SweepConfig {
    /// Grid points, with markers merged in and duplicates removed.
    pub fn values(&self) -> Result<Vec<f64>> {
        let bad = |msg: &str| CliError::validation(format!("sweep: {msg}"));
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if !(self.max > self.min) {
            return Err(bad("empty range: `max` must exceed `min`"));
        }
        if self.points < 2 {
            return Err(bad("`points` must be at least 2"));
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err(bad("log spacing needs a positive `min`"));
        }
        let n = self.points - 1;
        let mut v: Vec<f64> = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect();
        v[0] = self.min;
        v[n] = self.max;
        v.extend(
            self.markers
                .iter()
                .copied()
                .filter(|m| (self.min..=self.max).contains(m)),
        );
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }
}

/// Frequencies come in as JSON numbers and must sit on the 1 Hz grid.
pub fn hz(value: f64, key: &str) -> Result<Hz> {
    Hz::from_f64(value).map_err(|_| {
        CliError::validation(format!("`{key}`: {value} is not a whole number of hertz"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_name_their_path() {
        let err = ScenarioConfig::parse(
            r#"{"qubit": {"coupling_capacitance": 1,
            "total_capacitance": 2, "qubit_frequency": 3, "gate_duration": 4, "colour": 5}}"#,
        )
        .unwrap_err();
        assert!(err.contains("qubit"), "{err}");
        assert!(err.contains("colour"), "{err}");
        assert!(err.starts_with("2:"), "{err}");
    }

    #[test]
    fn missing_keys_are_rejected() {
        let err = ScenarioConfig::parse(r#"{"environment": {"impedance": 50}}"#).unwrap_err();
        assert!(err.contains("environment"), "{err}");
        assert!(err.contains("modulation_depth"), "{err}");
    }

    #[test]
    fn sweep_merges_markers() {
        let s = SweepConfig {
            min: 0.1,
            max: 1000.0,
            points: 5,
            spacing: Spacing::Log,
            markers: vec![0.84, 240.0, 5000.0],
        };
        let v = s.values().unwrap();
        assert_eq!(v.len(), 7);
        assert!(v.contains(&0.84) && v.contains(&240.0));
        assert_eq!(*v.last().unwrap(), 1000.0);
        let empty = SweepConfig {
            min: 1.0,
            max: 1.0,
            points: 5,
            spacing: Spacing::Linear,
            markers: vec![],
        };
        assert!(empty.values().is_err());
    }

    #[test]
    fn frequencies_must_be_whole_hertz() {
        assert_eq!(hz(80e9, "rf").unwrap(), Hz::from_int(80_000_000_000));
        assert!(hz(1.5, "rf").is_err());
    }
}
