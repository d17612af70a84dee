//! Asymmetric Lorentzian fit for a single mismatched-port resonance.
//!
//! Model, in power units:
//!
//! ```text
//! y(f) = B + A·|1 − (Q_L/Q_e)·e^{iφ} / (1 + 2i·Q_L·(f − f0)/f0)|²
//! ```
//!
//! `B` is supplied by the caller. It is fully degenerate with `A` away from
//! the dip on a finite window, so it is held fixed rather than fitted.

use alloc::vec;
use alloc::vec::Vec;

use super::lm::{self, LmSettings, Residuals};
use super::XYSeries;
use crate::error::{domain, Error, Result};
use crate::math;

/// Order of rows and columns in [`ResonatorFit::covariance`].
pub const RESONATOR_PARAMS: [&str; 5] = ["f0", "q_internal", "q_external", "phi", "amplitude"];

const START_PHASES: [f64; 5] = [-0.6, -0.3, 0.0, 0.3, 0.6];
const PPM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TraceKind {
    /// y is a power or PSD; the model is used as written.
    #[default]
    Power,
    /// y is a field amplitude; `A` multiplies |…| instead of |…|².
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Weighting {
    /// Residuals relative to the model above baseline; suits multiplicative
    /// noise such as averaged spectra.
    #[default]
    Relative,
    /// Plain residuals.
    Uniform,
    /// Residuals divided by the per-point sigma of the data.
    Sigma,
}

/// Optional starting values. Anything left `None` is estimated from the data.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ResonatorGuess {
    pub f0: Option<f64>,
    pub q_internal: Option<f64>,
    pub q_external: Option<f64>,
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorOptions {
    pub baseline: f64,
    pub trace: TraceKind,
    /// `Sigma` is chosen automatically when the series carries sigmas.
    pub weighting: Option<Weighting>,
    pub guess: ResonatorGuess,
    pub max_iterations: usize,
}

impl Default for ResonatorOptions {
    fn default() -> Self {
        Self {
            baseline: 0.0,
            trace: TraceKind::Power,
            weighting: None,
            guess: ResonatorGuess::default(),
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ResonatorFit {
    /// \[Hz\]
    pub f0: f64,
    pub q_internal: f64,
    pub q_external: f64,
    /// \[rad\]
    pub phi: f64,
    pub baseline: f64,
    pub amplitude: f64,
    /// Rows and columns follow [`RESONATOR_PARAMS`].
    pub covariance: [[f64; 5]; 5],
    /// RMS of y − model, in the units of y.
    pub residual_rms: f64,
    pub iterations: usize,
    pub trace: TraceKind,
}

impl ResonatorFit {
    pub fn q_loaded(&self) -> f64 {
        1.0 / (1.0 / self.q_internal + 1.0 / self.q_external)
    }

    pub fn sigmas(&self) -> [f64; 5] {
        core::array::from_fn(|i| math::sqrt(self.covariance[i][i]))
    }

    pub fn params(&self) -> [f64; 5] {
        [
            self.f0,
            self.q_internal,
            self.q_external,
            self.phi,
            self.amplitude,
        ]
    }

    pub fn eval(&self, f: f64) -> f64 {
        evaluate(
            self.trace,
            self.baseline,
            self.amplitude,
            f,
            self.f0,
            self.q_loaded(),
            self.q_external,
            self.phi,
        )
    }
}

/// |1 − r·e^{iφ}/(1 + iu)|² with r = Q_L/Q_e and u = 2·Q_L·(f − f0)/f0.
fn line_shape(u: f64, r: f64, phi: f64) -> f64 {
    let (s, c) = (math::sin(phi), math::cos(phi));
    1.0 - (2.0 * r * (c + u * s) - r * r) / (1.0 + u * u)
}

#[allow(clippy::too_many_arguments)]
fn evaluate(trace: TraceKind, b: f64, a: f64, f: f64, f0: f64, ql: f64, qe: f64, phi: f64) -> f64 {
    let u = 2.0 * ql * (f - f0) / f0;
    let shape = line_shape(u, ql / qe, phi).max(0.0);
    match trace {
        TraceKind::Power => b + a * shape,
        TraceKind::Amplitude => b + a * math::sqrt(shape),
    }
}

/// Model value at `f` in power units.
pub fn resonator_model(
    f: f64,
    f0: f64,
    q_internal: f64,
    q_external: f64,
    phi: f64,
    baseline: f64,
    amplitude: f64,
) -> f64 {
    let ql = 1.0 / (1.0 / q_internal + 1.0 / q_external);
    evaluate(
        TraceKind::Power,
        baseline,
        amplitude,
        f,
        f0,
        ql,
        q_external,
        phi,
    )
}

struct Problem<'a> {
    f: &'a [f64],
    y: &'a [f64],
    /// Fixed per-point divisor for `Uniform` and `Sigma` weighting.
    scale: Vec<f64>,
    relative: bool,
    baseline: f64,
    trace: TraceKind,
    f0_ref: f64,
}

/// Internal coordinates: [f0 offset in ppm of `f0_ref`, ln Q_i, ln Q_e, φ, ln A].
struct Natural {
    f0: f64,
    qi: f64,
    qe: f64,
    phi: f64,
    a: f64,
}

impl Problem<'_> {
    fn natural(&self, p: &[f64]) -> Natural {
        Natural {
            f0: self.f0_ref * (1.0 + p[0] * PPM),
            qi: math::exp(p[1]),
            qe: math::exp(p[2]),
            phi: p[3],
            a: math::exp(p[4]),
        }
    }

    fn model(&self, n: &Natural, f: f64) -> f64 {
        let ql = 1.0 / (1.0 / n.qi + 1.0 / n.qe);
        evaluate(self.trace, self.baseline, n.a, f, n.f0, ql, n.qe, n.phi)
    }
}

impl Residuals for Problem<'_> {
    fn len(&self) -> usize {
        self.f.len()
    }

    fn eval(&self, p: &[f64], out: &mut [f64]) -> bool {
        if p.iter().any(|v| !v.is_finite()) || p[1].abs() > 700.0 || p[2].abs() > 700.0 {
            return false;
        }
        let n = self.natural(p);
        if !(n.f0 > 0.0) {
            return false;
        }
        let floor = 1e-9 * n.a;
        for (i, o) in out.iter_mut().enumerate() {
            let m = self.model(&n, self.f[i]);
            let d = if self.relative {
                (m - self.baseline).max(floor)
            } else {
                self.scale[i]
            };
            *o = (self.y[i] - m) / d;
        }
        true
    }
}

/// Data-driven starting point shared by every phase start.
struct Seed {
    f0: f64,
    q_loaded: f64,
    depth: f64,
    amplitude: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn seed(f: &[f64], y: &[f64], baseline: f64, trace: TraceKind) -> Result<Seed> {
    let n = f.len();
    let edge = (n / 20).max(1);
    let raw: Vec<f64> = y.iter().map(|y| y - baseline).collect();
    let level = median(
        raw[..edge]
            .iter()
            .chain(&raw[n - edge..])
            .copied()
            .collect(),
    );
    if !(level > 0.0) {
        return Err(Error::DegenerateFit(
            "off-resonance level is not above the baseline",
        ));
    }
    // Normalised power shape, three-point smoothed for locating the minimum.
    let shape: Vec<f64> = raw
        .iter()
        .map(|v| {
            let s = v / level;
            match trace {
                TraceKind::Power => s,
                TraceKind::Amplitude => s * s,
            }
        })
        .collect();
    let smooth: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            shape[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let (imin, &smin) = smooth
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("series is non-empty");
    let depth = 1.0 - smin;

    let noise = 1.4826 / core::f64::consts::SQRT_2
        * median(shape.windows(2).map(|w| (w[1] - w[0]).abs()).collect());
    if !(depth > 8.0 * noise && depth > 1e-6) {
        return Err(Error::DegenerateFit("no resonance dip above the noise"));
    }

    let half = 1.0 - 0.5 * depth;
    let left = (0..imin).rev().find(|&i| smooth[i] >= half);
    let right = (imin + 1..n).find(|&i| smooth[i] >= half);
    let crossing = |i: usize, j: usize| {
        let (s0, s1) = (smooth[i], smooth[j]);
        if s1 == s0 {
            f[i]
        } else {
            f[i] + (half - s0) * (f[j] - f[i]) / (s1 - s0)
        }
    };
    let width = match (left, right) {
        (Some(l), Some(r)) => crossing(l, l + 1).max(f[l]) - crossing(r - 1, r),
        (Some(l), None) => 2.0 * (f[imin] - crossing(l, l + 1)),
        (None, Some(r)) => 2.0 * (crossing(r - 1, r) - f[imin]),
        (None, None) => return Err(Error::DegenerateFit("dip is wider than the data window")),
    }
    .abs();
    let f0 = f[imin];
    if !(f0 > 0.0) {
        return domain("data", "resonance frequency must be positive");
    }
    let spacing = (f[n - 1] - f[0]) / (n - 1) as f64;
    let width = width.max(spacing);
    Ok(Seed {
        f0,
        q_loaded: f0 / width,
        depth: depth.min(1.0),
        amplitude: level,
    })
}

/// Coupling ratio r = Q_L/Q_e reproducing `depth` for a given phase, on the
/// physical branch r < cos φ.
fn coupling_from_depth(depth: f64, phi: f64) -> f64 {
    let c = math::cos(phi);
    let disc = (c * c - depth).max(0.0);
    (c - math::sqrt(disc)).clamp(1e-3, 0.999)
}

fn check_resolution(f: &[f64], f0: f64, q_loaded: f64) -> Result<()> {
    let linewidth = f0 / q_loaded;
    let n = f.len();
    let spacing = (f[n - 1] - f[0]) / (n - 1) as f64;
    if linewidth < 2.0 * spacing {
        return Err(Error::DegenerateFit(
            "linewidth is below twice the point spacing",
        ));
    }
    if f[n - 1] - f[0] < 3.0 * linewidth {
        return Err(Error::DegenerateFit(
            "data window spans fewer than three linewidths",
        ));
    }
    Ok(())
}

pub fn fit_resonator(data: &XYSeries, guess: Option<&ResonatorGuess>) -> Result<ResonatorFit> {
    let options = ResonatorOptions {
        guess: guess.copied().unwrap_or_default(),
        ..ResonatorOptions::default()
    };
    fit_resonator_with(data, &options)
}

pub fn fit_resonator_with(data: &XYSeries, options: &ResonatorOptions) -> Result<ResonatorFit> {
    data.require(6, "need at least six points")?;
    if !options.baseline.is_finite() {
        return domain("baseline", "must be finite");
    }
    if data.xs().any(|f| !(f > 0.0)) {
        return domain("data", "frequencies must be positive");
    }
    let weighting = options.weighting.unwrap_or(if data.has_sigma() {
        Weighting::Sigma
    } else {
        Weighting::Relative
    });
    if weighting == Weighting::Sigma && !data.has_sigma() {
        return domain("weighting", "sigma weighting needs per-point sigmas");
    }
    let f: Vec<f64> = data.xs().collect();
    let y: Vec<f64> = data.ys().collect();
    let s = seed(&f, &y, options.baseline, options.trace)?;
    let g = options.guess;
    let f0_ref = g.f0.unwrap_or(s.f0);
    let ql0 = match (g.q_internal, g.q_external) {
        (Some(qi), Some(qe)) => 1.0 / (1.0 / qi + 1.0 / qe),
        _ => s.q_loaded,
    };
    if !(f0_ref > 0.0 && ql0 > 0.0) {
        return domain("guess", "f0 and quality factors must be positive");
    }
    check_resolution(&f, f0_ref, ql0)?;

    let scale = match weighting {
        Weighting::Sigma => data
            .points()
            .iter()
            .map(|p| p.sigma.unwrap_or(1.0))
            .collect(),
        _ => vec![s.amplitude; f.len()],
    };
    let problem = Problem {
        f: &f,
        y: &y,
        scale,
        relative: weighting == Weighting::Relative,
        baseline: options.baseline,
        trace: options.trace,
        f0_ref,
    };

    let phases: Vec<f64> = match g.phi {
        Some(phi) => vec![phi],
        None => START_PHASES.to_vec(),
    };
    let settings = LmSettings {
        max_iterations: options.max_iterations,
        ..LmSettings::default()
    };
    let mut best: Option<lm::LmOutcome> = None;
    for phi in phases {
        let (qi, qe) = match (g.q_internal, g.q_external) {
            (Some(qi), Some(qe)) => (qi, qe),
            _ => {
                let r = coupling_from_depth(s.depth, phi);
                let qe = ql0 / r;
                (1.0 / (1.0 / ql0 - 1.0 / qe), qe)
            }
        };
        let start = [0.0, math::ln(qi), math::ln(qe), phi, math::ln(s.amplitude)];
        if let Some(out) = lm::minimize(&problem, &start, settings) {
            if best.as_ref().is_none_or(|b| out.cost < b.cost) {
                best = Some(out);
            }
        }
    }
    let Some(out) = best else {
        return Err(Error::DegenerateFit(
            "model cannot be evaluated at any starting point",
        ));
    };
    let n = problem.natural(&out.params);
    if !out.converged {
        return Err(Error::NoConvergence {
            iterations: out.iterations,
            cost: out.cost,
            best: vec![n.f0, n.qi, n.qe, n.phi, n.a],
        });
    }
    let ql = 1.0 / (1.0 / n.qi + 1.0 / n.qe);
    check_resolution(&f, n.f0, ql)?;

    let dof = f.len().saturating_sub(5).max(1) as f64;
    let s2 = if weighting == Weighting::Sigma {
        1.0
    } else {
        2.0 * out.cost / dof
    };
    let jacobian_scale = [f0_ref * PPM, n.qi, n.qe, 1.0, n.a];
    let covariance = internal_covariance(&out.normal)
        .map(|c| {
            core::array::from_fn(|i| {
                core::array::from_fn(|j| c[i][j] * s2 * jacobian_scale[i] * jacobian_scale[j])
            })
        })
        .unwrap_or([[f64::INFINITY; 5]; 5]);

    let ss: f64 = f
        .iter()
        .zip(&y)
        .map(|(&f, &y)| {
            let d = y - problem.model(&n, f);
            d * d
        })
        .sum();
    let phi = wrap_phase(n.phi);
    Ok(ResonatorFit {
        f0: n.f0,
        q_internal: n.qi,
        q_external: n.qe,
        phi,
        baseline: options.baseline,
        amplitude: n.a,
        covariance,
        residual_rms: math::sqrt(ss / f.len() as f64),
        iterations: out.iterations,
        trace: options.trace,
    })
}

fn wrap_phase(phi: f64) -> f64 {
    use core::f64::consts::PI;
    phi - 2.0 * PI * math::floor((phi + PI) / (2.0 * PI))
}

/// (JᵀJ)⁻¹ computed on the unit-diagonal rescaling, with a small ridge
/// when a direction is unconstrained by the data.
fn internal_covariance(normal: &crate::linalg::Matrix) -> Option<[[f64; 5]; 5]> {
    let n = normal.dim();
    let d: Vec<f64> = (0..n).map(|i| math::sqrt(normal.get(i, i))).collect();
    if d.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let mut scaled = crate::linalg::Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            scaled.set(i, j, normal.get(i, j) / (d[i] * d[j]));
        }
    }
    let inv = scaled.inverse_spd().or_else(|| {
        for i in 0..n {
            scaled.add(i, i, 1e-12);
        }
        scaled.inverse_spd()
    })?;
    Some(core::array::from_fn(|i| {
        core::array::from_fn(|j| inv.get(i, j) / (d[i] * d[j]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gauss(rng: &mut ChaCha8Rng) -> f64 {
        let u1 = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
        let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
    }

    fn synth(f0: f64, qi: f64, qe: f64, phi: f64, noise: f64, seed: u64) -> XYSeries {
        let ql = 1.0 / (1.0 / qi + 1.0 / qe);
        let lw = f0 / ql;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<f64> = (0..1001)
            .map(|i| f0 + lw * (-5.0 + 10.0 * i as f64 / 1000.0))
            .collect();
        let y: Vec<f64> = f
            .iter()
            .map(|&f| {
                resonator_model(f, f0, qi, qe, phi, 0.0, 3e-15) * (1.0 + noise * gauss(&mut rng))
            })
            .collect();
        XYSeries::from_xy(&f, &y).unwrap()
    }

    #[test]
    fn model_limits() {
        // Off resonance the shape tends to one; at φ = 0 the dip floor is (1 − r)².
        assert!((resonator_model(1e12, 1e9, 1e4, 1e4, 0.0, 0.0, 1.0) - 1.0).abs() < 1e-6);
        let floor = resonator_model(1e9, 1e9, 3e4, 1e4, 0.0, 0.0, 1.0);
        assert!((floor - 0.25 * 0.25).abs() < 1e-12);
    }

    #[test]
    fn noiseless_recovery() {
        let data = synth(82.348e9, 6e4, 2e3, 0.2, 0.0, 1);
        let fit = fit_resonator(&data, None).unwrap();
        assert!((fit.f0 / 82.348e9 - 1.0).abs() < 1e-9, "{fit:?}");
        assert!((fit.q_internal / 6e4 - 1.0).abs() < 1e-4);
        assert!((fit.q_external / 2e3 - 1.0).abs() < 1e-6);
        assert!((fit.phi - 0.2).abs() < 1e-6);
    }

    #[test]
    fn measured_regime_with_noise() {
        let data = synth(82.348e9, 6e4, 2e3, 0.2, 0.01, 7);
        let fit = fit_resonator(&data, None).unwrap();
        assert!((fit.f0 / 82.348e9 - 1.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.q_internal / 6e4 - 1.0).abs() < 0.1);
        assert!((fit.q_external / 2e3 - 1.0).abs() < 0.1);
        assert!(fit.q_loaded() < fit.q_internal.min(fit.q_external) * 1.0001);
        assert!(fit.sigmas().iter().all(|s| s.is_finite() && *s > 0.0));
    }

    #[test]
    fn symmetric_limit() {
        let data = synth(5e9, 1e9, 1e3, 0.0, 0.0, 2);
        let fit = fit_resonator(&data, None).unwrap();
        assert!(fit.phi.abs() < 1e-6, "{fit:?}");
        assert!((fit.q_external / 1e3 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn flat_data_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f: Vec<f64> = (0..501).map(|i| 80e9 + 1e6 * i as f64).collect();
        let y: Vec<f64> = f
            .iter()
            .map(|_| 1e-15 * (1.0 + 0.01 * gauss(&mut rng)))
            .collect();
        let err = fit_resonator(&XYSeries::from_xy(&f, &y).unwrap(), None).unwrap_err();
        assert!(matches!(err, Error::DegenerateFit(_)), "{err:?}");
    }

    #[test]
    fn amplitude_trace() {
        let base = synth(82.348e9, 6e4, 2e3, -0.3, 0.0, 4);
        let f: Vec<f64> = base.xs().collect();
        let y: Vec<f64> = base.ys().map(math::sqrt).collect();
        let opts = ResonatorOptions {
            trace: TraceKind::Amplitude,
            ..ResonatorOptions::default()
        };
        let fit = fit_resonator_with(&XYSeries::from_xy(&f, &y).unwrap(), &opts).unwrap();
        assert!((fit.q_external / 2e3 - 1.0).abs() < 1e-5, "{fit:?}");
        assert!((fit.phi + 0.3).abs() < 1e-5);
    }

    #[test]
    fn too_few_points() {
        let s = XYSeries::from_xy(&[1.0, 2.0, 3.0], &[1.0, 0.5, 1.0]).unwrap();
        assert!(fit_resonator(&s, None).is_err());
    }
}
