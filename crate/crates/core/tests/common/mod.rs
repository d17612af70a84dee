#![allow(dead_code)]

use photolink_core::fitting::{resonator_model, XYSeries};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn range(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

pub fn log_range(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * uniform(rng)).exp()
}

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = uniform(rng).max(f64::MIN_POSITIVE);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[derive(Debug, Clone, Copy)]
pub struct Resonance {
    pub f0: f64,
    pub qi: f64,
    pub qe: f64,
    pub phi: f64,
}

impl Resonance {
    pub fn q_loaded(&self) -> f64 {
        1.0 / (1.0 / self.qi + 1.0 / self.qe)
    }

    /// 4001 points over ±5 linewidths with multiplicative Gaussian noise.
    pub fn trace(&self, amplitude: f64, noise: f64, rng: &mut ChaCha8Rng) -> XYSeries {
        let lw = self.f0 / self.q_loaded();
        let f: Vec<f64> = (0..4001)
            .map(|i| self.f0 + lw * (-5.0 + 0.0025 * i as f64))
            .collect();
        let y: Vec<f64> = f
            .iter()
            .map(|&f| {
                resonator_model(f, self.f0, self.qi, self.qe, self.phi, 0.0, amplitude)
                    * (1.0 + noise * gauss(rng))
            })
            .collect();
        XYSeries::from_xy(&f, &y).unwrap()
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
