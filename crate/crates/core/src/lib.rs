//! Physics and data-reduction models for optically driven cryogenic
//! microwave and millimeter-wave sources.
//!
//! The crate is `no_std` and only needs `alloc`. Everything in it is a pure
//! function of its inputs; the `photolink` crate layers file formats and a
//! command-line interface on top.
//!
//! Units are strict SI throughout (W, Hz, s, K, Ω, A/W). Frequencies are
//! stored as ordinary frequency `f`; wherever a formula needs an angular
//! frequency it is formed as `2πf` at the point of use. "dB" always means
//! power decibels.
//!
//! Modules:
//! - [`units`]: physical constants, dB arithmetic.
//! - [`linkmodel`]: responsivity, generated RF power, efficiency, shot and
//!   thermal noise.
//! - [`tradeoff`]: X-gate optical power, quantum-noise-limited gate error,
//!   qubit-count budget and the responsivity sweep.
//! - [`gatesim`]: Monte Carlo check of the gate-error law under Poisson
//!   photon statistics.
//! - [`rfchain`]: Friis cascades, mixer noise back-out, SNR budgets,
//!   insertion loss.
//! - [`freqplan`]: exact tone algebra for sidebands, beat notes, waveguide
//!   cutoff and harmonic mixing.
//! - [`fitting`]: quadratic fits, asymmetric-Lorentzian resonator fit and
//!   detector calibration.

#![no_std]
// `!(x > 0.0)` is the NaN-rejecting form used for input validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod linalg;
mod math;

pub mod fitting;
pub mod freqplan;
pub mod gatesim;
pub mod linkmodel;
pub mod rfchain;
pub mod tradeoff;
pub mod units;

pub use error::{Error, Result, Warning};
