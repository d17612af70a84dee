//! Cascaded RF chain arithmetic: Friis noise factor, mixer gain and noise
//! back-out, input SNR budget and insertion loss from power fits.
//!
//! In-band noise powers here use single-sided densities (shot noise 2e₀I),
//! whereas [`crate::linkmodel`] stores double-sided e₀I. The factor of two
//! is applied explicitly in [`SnrBudget::evaluate`].

use alloc::string::String;

use crate::error::{domain, Error, Result, Warning};
use crate::units::{from_db, photon_energy, BOLTZMANN, ELECTRON_CHARGE};

/// Noise bandwidth between the WR10 cutoff and an 80 GHz tone \[Hz\].
pub const DEFAULT_NOISE_BANDWIDTH: f64 = 21e9;

/// One component of a cascade.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainStage {
    pub label: String,
    pub gain_linear: f64,
    pub noise_factor_linear: f64,
}

impl ChainStage {
    pub fn new(
        label: impl Into<String>,
        gain_linear: f64,
        noise_factor_linear: f64,
    ) -> Result<Self> {
        if !(gain_linear > 0.0) || !gain_linear.is_finite() {
            return domain("gain_linear", "must be positive and finite");
        }
        if !(noise_factor_linear >= 1.0) || !noise_factor_linear.is_finite() {
            return domain("noise_factor_linear", "must be at least 1");
        }
        Ok(Self {
            label: label.into(),
            gain_linear,
            noise_factor_linear,
        })
    }

    /// Builds a stage from datasheet-style gain and noise figure in dB.
    pub fn from_db(label: impl Into<String>, gain_db: f64, noise_figure_db: f64) -> Result<Self> {
        Self::new(label, from_db(gain_db), from_db(noise_figure_db))
    }
}

/// Total noise factor F₁ + Σ (F_k − 1)/(G₁⋯G_{k−1}).
pub fn friis_total(stages: &[ChainStage]) -> Result<f64> {
    let (first, rest) = match stages.split_first() {
        Some(split) => split,
        None => return domain("stages", "cascade is empty"),
    };
    let mut total = first.noise_factor_linear;
    let mut gain = first.gain_linear;
    for stage in rest {
        total += (stage.noise_factor_linear - 1.0) / gain;
        gain *= stage.gain_linear;
    }
    Ok(total)
}

/// Product of stage gains.
pub fn cascade_gain(stages: &[ChainStage]) -> f64 {
    stages.iter().map(|s| s.gain_linear).product()
}

/// Noise factor of a mixer sandwiched between a front-end amplifier and an
/// IF amplifier, given the measured total noise factor.
pub fn backout_mixer_noise_factor(
    total_noise_factor: f64,
    front_noise_factor: f64,
    front_gain: f64,
    back_noise_factor: f64,
    mixer_gain: f64,
) -> Result<f64> {
    if !(front_gain > 0.0) {
        return domain("front_gain", "must be positive");
    }
    if !(mixer_gain > 0.0) {
        return domain("mixer_gain", "must be positive");
    }
    let f = 1.0 + front_gain * (total_noise_factor - front_noise_factor)
        - (back_noise_factor - 1.0) / mixer_gain;
    if !(f >= 1.0) {
        return Err(Error::Inconsistent(
            "total noise factor is too low for the surrounding stages",
        ));
    }
    Ok(f)
}

/// Mixer conversion gain G_tot/(G_front·G_back).
pub fn mixer_conversion_gain(total_gain: f64, front_gain: f64, back_gain: f64) -> Result<f64> {
    if !(total_gain > 0.0) {
        return domain("total_gain", "must be positive");
    }
    if !(front_gain > 0.0) || !(back_gain > 0.0) {
        return domain("stage gain", "must be positive");
    }
    Ok(total_gain / (front_gain * back_gain))
}

/// Powers entering an SNR calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SnrBudget {
    /// \[W\]
    pub signal_power: f64,
    /// Shot-noise power in the bandwidth \[W\].
    pub shot_power: f64,
    /// Johnson–Nyquist power k_B·T·B \[W\].
    pub thermal_power: f64,
    /// \[Hz\]
    pub bandwidth: f64,
}

impl SnrBudget {
    /// Shot power 2e₀·𝓡P₀·Z₀·B and thermal power k_B·T·B.
    pub fn evaluate(
        signal_power: f64,
        responsivity: f64,
        optical_power: f64,
        impedance: f64,
        temperature: f64,
        bandwidth: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("signal_power", signal_power),
            ("responsivity", responsivity),
            ("optical_power", optical_power),
            ("impedance", impedance),
            ("temperature", temperature),
            ("bandwidth", bandwidth),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return domain(name, "must be finite and non-negative");
            }
        }
        Ok(Self {
            signal_power,
            shot_power: 2.0
                * ELECTRON_CHARGE
                * responsivity
                * optical_power
                * impedance
                * bandwidth,
            thermal_power: BOLTZMANN * temperature * bandwidth,
            bandwidth,
        })
    }

    pub fn noise_power(&self) -> f64 {
        self.shot_power + self.thermal_power
    }

    pub fn snr(&self) -> Result<f64> {
        let noise = self.noise_power();
        if !(noise > 0.0) {
            return domain("noise_power", "no noise in the budget");
        }
        Ok(self.signal_power / noise)
    }
}

/// Input SNR of a photodiode link with shot and thermal noise.
pub fn snr_in(
    signal_power: f64,
    responsivity: f64,
    optical_power: f64,
    impedance: f64,
    temperature: f64,
    bandwidth: f64,
) -> Result<f64> {
    SnrBudget::evaluate(
        signal_power,
        responsivity,
        optical_power,
        impedance,
        temperature,
        bandwidth,
    )?
    .snr()
}

/// Power transmission of the chain after the photodiode, from the
/// coefficient `a` of a ½·a·P₀² fit to detected RF power.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InsertionLoss {
    pub ratio: f64,
    pub warning: Option<Warning>,
}

impl InsertionLoss {
    pub fn db(&self) -> f64 {
        10.0 * crate::math::log10(self.ratio)
    }
}

/// |𝓛|² = a/(𝓡²·Z₀). Ratios above 1 are returned with a warning.
pub fn insertion_loss_from_fit(a: f64, responsivity: f64, impedance: f64) -> Result<InsertionLoss> {
    if !(a > 0.0) {
        return domain("a", "must be positive");
    }
    if !(responsivity > 0.0) {
        return domain("responsivity", "must be positive");
    }
    if !(impedance > 0.0) {
        return domain("impedance", "must be positive");
    }
    let ratio = a / (responsivity * responsivity * impedance);
    Ok(InsertionLoss {
        ratio,
        warning: (ratio > 1.0).then_some(Warning::GainInPassiveChain),
    })
}

/// Effective occupation at `rf_frequency` from a single-sided IF noise PSD
/// measured after a chain of power gain `total_gain`.
pub fn n_eff_from_measured_psd(
    psd_ss_if: f64,
    total_gain: f64,
    impedance: f64,
    rf_frequency: f64,
) -> Result<f64> {
    if !(total_gain > 0.0) {
        return domain("total_gain", "must be positive");
    }
    if !(impedance > 0.0) {
        return domain("impedance", "must be positive");
    }
    if !(rf_frequency > 0.0) {
        return domain("rf_frequency", "must be positive");
    }
    let current_psd_ds = psd_ss_if / (2.0 * total_gain * impedance);
    Ok(0.5 * current_psd_ds * impedance / photon_energy(rf_frequency))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::to_db;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn table_stages(mixer_f: f64) -> alloc::vec::Vec<ChainStage> {
        let g_mix = mixer_conversion_gain(0.53, from_db(22.5), from_db(31.0)).unwrap();
        vec![
            ChainStage::from_db("mmw_lna", 22.5, 0.3).unwrap(),
            ChainStage::new("mixer", g_mix, mixer_f).unwrap(),
            ChainStage::from_db("uw_lna", 31.0, 0.03).unwrap(),
        ]
    }

    #[test]
    fn friis_single_stage() {
        let s = ChainStage::new("amp", 100.0, 2.5).unwrap();
        assert_eq!(friis_total(&[s]).unwrap(), 2.5);
        assert!(friis_total(&[]).is_err());
    }

    #[test]
    fn friis_detection_chain() {
        let f = friis_total(&table_stages(10446.0)).unwrap();
        assert!((f / 76.2 - 1.0).abs() < 0.05, "{f}");
        assert!((to_db(f).unwrap().0 - 18.8).abs() < 0.3);
    }

    #[test]
    fn friis_high_first_gain_limit() {
        let stages = vec![
            ChainStage::new("a", 1e12, 1.3).unwrap(),
            ChainStage::new("b", 0.01, 1e4).unwrap(),
            ChainStage::new("c", 10.0, 5.0).unwrap(),
        ];
        assert_relative_eq!(friis_total(&stages).unwrap(), 1.3, max_relative = 1e-7);
    }

    #[test]
    fn mixer_backout_examples() {
        let g_mix = mixer_conversion_gain(0.53, from_db(22.5), from_db(31.0)).unwrap();
        let f = backout_mixer_noise_factor(76.2, from_db(0.3), from_db(22.5), from_db(0.03), g_mix)
            .unwrap();
        assert_relative_eq!(f, 1.04e4, max_relative = 0.01);
        assert!((to_db(f).unwrap().0 - 41.0).abs() <= 1.5);
        let retotal = friis_total(&table_stages(f)).unwrap();
        assert_relative_eq!(retotal, 76.2, max_relative = 1e-9);
        let ideal = backout_mixer_noise_factor(1.2, 1.2, 100.0, 1.0, 1e-3).unwrap();
        assert_relative_eq!(ideal, 1.0);
    }

    #[test]
    fn mixer_backout_rejects_inconsistent_total() {
        let r = backout_mixer_noise_factor(1.0, 1.0715, 177.8, 1.0069, 2.37e-6);
        assert!(matches!(r, Err(Error::Inconsistent(_))));
    }

    #[test]
    fn conversion_gain_examples() {
        let g = mixer_conversion_gain(0.53, 177.83, 1258.9).unwrap();
        assert_relative_eq!(g, 2.3675e-6, max_relative = 1e-3);
        assert!((to_db(g).unwrap().0 + 56.3).abs() < 0.3);
        assert_relative_eq!(mixer_conversion_gain(2.0 * 3.0, 2.0, 3.0).unwrap(), 1.0);
        assert_relative_eq!(
            mixer_conversion_gain(0.265, 177.83, 1258.9).unwrap(),
            g / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn snr_budget_examples() {
        let b = SnrBudget::evaluate(14.97e-9, 0.05, 1e-3, 50.0, 4.0, 21e9).unwrap();
        assert!(
            (b.shot_power / 0.0167e-9 - 1.0).abs() < 0.02,
            "{}",
            b.shot_power
        );
        assert!((b.thermal_power / 0.00116e-9 - 1.0).abs() < 0.02);
        assert!((b.snr().unwrap() / 838.0 - 1.0).abs() < 0.02);
        assert_eq!(snr_in(0.0, 0.05, 1e-3, 50.0, 4.0, 21e9).unwrap(), 0.0);
        assert!(snr_in(1e-9, 0.05, 0.0, 50.0, 0.0, 21e9).is_err());
    }

    #[test]
    fn insertion_loss_examples() {
        let warm = insertion_loss_from_fit(0.090, 0.40, 50.0).unwrap();
        assert_relative_eq!(warm.ratio, 0.01125, max_relative = 1e-12);
        assert!((warm.db() + 19.5).abs() < 0.05);
        let cold = insertion_loss_from_fit(0.020, 0.050, 50.0).unwrap();
        assert_relative_eq!(cold.ratio, 0.16, max_relative = 1e-12);
        assert!((cold.db() + 8.0).abs() < 0.05);
        let lossless = insertion_loss_from_fit(0.4 * 0.4 * 50.0, 0.4, 50.0).unwrap();
        assert_relative_eq!(lossless.ratio, 1.0, max_relative = 1e-12);
        assert_eq!(lossless.warning, None);
        let gainy = insertion_loss_from_fit(20.0, 0.4, 50.0).unwrap();
        assert_eq!(gainy.warning, Some(Warning::GainInPassiveChain));
    }

    #[test]
    fn measured_psd_conversion() {
        // Inverse of the conversion: S = 4·G·hf·n.
        let hf = photon_energy(80e9);
        for n in [30.0, 1200.0] {
            let s = 4.0 * 0.53 * hf * n;
            assert_relative_eq!(
                n_eff_from_measured_psd(s, 0.53, 50.0, 80e9).unwrap(),
                n,
                max_relative = 1e-12
            );
        }
        assert_eq!(n_eff_from_measured_psd(0.0, 0.53, 50.0, 80e9).unwrap(), 0.0);
    }
}
