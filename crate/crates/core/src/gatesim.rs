//! Monte Carlo check of the quantum-noise-limited X-gate error.
//!
//! Each trial draws a photon number N from a Poisson distribution with mean
//! `n_target`, rotates |0⟩ by θ = π·N/n_target and records the probability
//! of still finding |0⟩. The mean over trials approaches (π/2)²/n_target.
//!
//! # Reproducibility
//!
//! Trials are cut into consecutive blocks of [`BLOCK_TRIALS`]. Block `k`
//! draws from a ChaCha8 generator seeded with `seed` and set to stream `k`,
//! so any block can be evaluated on its own. Block statistics are merged in
//! block order, which makes the result bit-identical however the blocks
//! were distributed over workers.

use core::f64::consts::{FRAC_PI_2, PI};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{domain, Result};
use crate::math;

/// Trials per independently seeded block.
pub const BLOCK_TRIALS: u64 = 1 << 16;

/// Below this mean the photon number is sampled exactly by inversion.
pub const EXACT_POISSON_LIMIT: f64 = 1e3;

/// Largest mean handled in one inversion pass; bigger means are split into
/// a sum of independent Poisson draws so exp(−λ) never underflows.
const INVERSION_CHUNK: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    /// Multiplies by −i.
    fn times_minus_i(self) -> Self {
        Self::new(self.im, -self.re)
    }
}

impl core::ops::Add for Complex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl core::ops::Mul for Complex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

/// Pure state of a two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub amp0: Complex,
    pub amp1: Complex,
}

impl QubitState {
    pub const GROUND: Self = Self {
        amp0: Complex::ONE,
        amp1: Complex::ZERO,
    };

    pub const EXCITED: Self = Self {
        amp0: Complex::ZERO,
        amp1: Complex::ONE,
    };

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }
}

/// Rotation about x: cos(θ/2)·s − i·sin(θ/2)·σ_x·s.
pub fn rx(theta: f64, s: &QubitState) -> QubitState {
    let c = math::cos(theta / 2.0);
    let sn = math::sin(theta / 2.0);
    QubitState {
        amp0: s.amp0.scale(c) + s.amp1.scale(sn).times_minus_i(),
        amp1: s.amp1.scale(c) + s.amp0.scale(sn).times_minus_i(),
    }
}

/// Probability |⟨0|R_x(θ)|0⟩|² = cos²(θ/2) that a π pulse of actual angle θ
/// leaves the qubit in |0⟩.
pub fn error_prob_exact(theta: f64) -> f64 {
    let c = math::cos(theta / 2.0);
    c * c
}

/// Pulse area for `photons` when `target` photons make a π pulse.
pub fn angle_from_photons(photons: f64, target: f64) -> f64 {
    PI * photons / target
}

/// (π/2)²/N, the analytic limit the simulation is checked against.
pub fn analytic_gate_error(n_target: f64) -> f64 {
    FRAC_PI_2 * FRAC_PI_2 / n_target
}

/// Summary of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonteCarloResult {
    pub mean_error: f64,
    pub std_error_of_mean: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Running count, mean and sum of squared deviations for one block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl BlockStats {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise combination of two disjoint sets of samples.
    pub fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let nb = other.count as f64;
        let nn = n as f64;
        Self {
            count: n,
            mean: self.mean + delta * nb / nn,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * nb / nn,
        }
    }
}

/// Photon-number sampler. `variance_scale` < 1 mimics amplitude-squeezed
/// light; any value other than 1 uses the Gaussian path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonSampler {
    mean: f64,
    variance_scale: f64,
}

impl PhotonSampler {
    pub fn new(mean: f64, variance_scale: f64) -> Result<Self> {
        if !(mean > 0.0) || !mean.is_finite() {
            return domain("mean", "must be positive and finite");
        }
        if !(variance_scale >= 0.0) || !variance_scale.is_finite() {
            return domain("variance_scale", "must be non-negative");
        }
        Ok(Self {
            mean,
            variance_scale,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.mean < EXACT_POISSON_LIMIT && self.variance_scale == 1.0
    }

    pub fn sample<R: RngCore>(&self, rng: &mut R) -> u64 {
        if self.is_exact() {
            let mut remaining = self.mean;
            let mut total = 0;
            while remaining > 0.0 {
                let chunk = remaining.min(INVERSION_CHUNK);
                total += poisson_inversion(chunk, rng);
                remaining -= chunk;
            }
            total
        } else {
            let sd = math::sqrt(self.variance_scale * self.mean);
            let n = math::round(self.mean + sd * standard_normal(rng));
            if n < 0.0 {
                0
            } else {
                n as u64
            }
        }
    }
}

/// Uniform on [0, 1) with 53 random bits.
fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box–Muller; uses the cosine branch only.
fn standard_normal<R: RngCore>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * PI * u2)
}

fn poisson_inversion<R: RngCore>(lambda: f64, rng: &mut R) -> u64 {
    let u = uniform(rng);
    let mut k = 0u64;
    let mut p = math::exp(-lambda);
    let mut cdf = p;
    // The tail beyond ~λ + 40√λ carries no probability at double precision;
    // the cap only stops rounding from looping forever.
    let cap = (lambda + 40.0 * math::sqrt(lambda) + 40.0) as u64;
    while u >= cdf && k < cap {
        k += 1;
        p *= lambda / k as f64;
        cdf += p;
    }
    k
}

/// Generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// `(block index, trials in block)` for a run of `trials`.
pub fn block_layout(trials: u64) -> impl Iterator<Item = (u64, u64)> {
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    (0..blocks).map(move |b| (b, BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS)))
}

/// Validated description of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateErrorRun {
    pub n_target: f64,
    pub trials: u64,
    pub seed: u64,
    sampler: PhotonSampler,
}

impl GateErrorRun {
    pub fn new(n_target: f64, trials: u64, seed: u64) -> Result<Self> {
        Self::with_variance_scale(n_target, trials, seed, 1.0)
    }

    pub fn with_variance_scale(
        n_target: f64,
        trials: u64,
        seed: u64,
        variance_scale: f64,
    ) -> Result<Self> {
        if !(n_target >= 10.0) || !n_target.is_finite() {
            return domain("n_target", "must be at least 10");
        }
        if trials == 0 {
            return domain("trials", "must be at least 1");
        }
        Ok(Self {
            n_target,
            trials,
            seed,
            sampler: PhotonSampler::new(n_target, variance_scale)?,
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = (u64, u64)> {
        block_layout(self.trials)
    }

    /// Runs one block; `count` must match [`block_layout`].
    pub fn run_block(&self, block: u64, count: u64) -> BlockStats {
        let mut rng = block_rng(self.seed, block);
        let mut stats = BlockStats::default();
        for _ in 0..count {
            let n = self.sampler.sample(&mut rng) as f64;
            stats.push(error_prob_exact(angle_from_photons(n, self.n_target)));
        }
        stats
    }

    /// Folds per-block statistics, given in block order, into a result.
    pub fn finish<I: IntoIterator<Item = BlockStats>>(&self, blocks: I) -> MonteCarloResult {
        let total = blocks
            .into_iter()
            .fold(BlockStats::default(), BlockStats::merge);
        let var = if total.count > 1 {
            total.m2 / (total.count - 1) as f64
        } else {
            0.0
        };
        MonteCarloResult {
            mean_error: total.mean,
            std_error_of_mean: math::sqrt(var / total.count as f64),
            trials: total.count,
            seed: self.seed,
        }
    }

    pub fn run(&self) -> MonteCarloResult {
        self.finish(self.blocks().map(|(b, n)| self.run_block(b, n)))
    }
}

/// Mean X-gate error over `trials` Poisson-distributed pulses.
pub fn monte_carlo_gate_error(n_target: f64, trials: u64, seed: u64) -> Result<MonteCarloResult> {
    Ok(GateErrorRun::new(n_target, trials, seed)?.run())
}
