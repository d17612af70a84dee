//! Tone algebra for sideband generation, photodiode beat notes, waveguide
//! cutoff filtering, harmonic down-conversion and spur checks.
//!
//! Frequencies are exact rationals in hertz ([`Hz`]). Plans built from
//! integer-hertz inputs keep `f_IF = f_RF − N·f_LO` exact even when `N`
//! does not divide `f_RF − f_IF`; conversion to `f64` happens only at the
//! boundary.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use crate::error::{domain, Result};

/// WR10 fundamental-mode cutoff.
pub const WR10_CUTOFF: Hz = Hz::from_int(59_000_000_000);
/// WR10 recommended band (W band).
pub const WR10_BAND: (Hz, Hz) = (Hz::from_int(75_000_000_000), Hz::from_int(110_000_000_000));
/// WR15 recommended band (V band).
pub const WR15_BAND: (Hz, Hz) = (Hz::from_int(50_000_000_000), Hz::from_int(75_000_000_000));
/// Default spur guard around the IF.
pub const DEFAULT_GUARD: Hz = Hz::from_int(10_000_000);
/// Default highest LO harmonic considered by spur checks.
pub const DEFAULT_MAX_HARMONIC: u32 = 16;
/// C-band carrier near 1550 nm, rounded to the hertz. Only frequency
/// differences matter downstream.
pub const DEFAULT_OPTICAL_CARRIER: Hz = Hz::from_int(193_414_489_032_258);
/// Second-order sidebands and a ×2 multiplier give the SLFI ×8 relation.
pub const SLFI_HARMONIC: u32 = 8;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An exact frequency p/q hertz with q > 0 and gcd(p, q) = 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hz {
    num: i128,
    den: i128,
}

impl Hz {
    pub const ZERO: Self = Self::from_int(0);

    pub const fn from_int(hz: i128) -> Self {
        Self { num: hz, den: 1 }
    }

    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Self {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    /// Exact conversion from a float that holds a whole number of hertz.
    pub fn from_f64(hz: f64) -> Result<Self> {
        if !hz.is_finite() || crate::math::floor(hz) != hz || hz.abs() > 1e30 {
            return domain("frequency", "must be a whole number of hertz");
        }
        Ok(Self::from_int(hz as i128))
    }

    pub fn numer(self) -> i128 {
        self.num
    }

    pub fn denom(self) -> i128 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Nearest whole hertz, halves away from zero.
    pub fn round_hz(self) -> i128 {
        let twice = 2 * self.num + self.num.signum() * self.den;
        twice / (2 * self.den)
    }

    pub fn abs(self) -> Self {
        Self {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn is_negative(self) -> bool {
        self.num < 0
    }

    pub fn div_int(self, k: i128) -> Self {
        Self::new(self.num, self.den * k)
    }
}

impl Add for Hz {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl Sub for Hz {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.den - rhs.num * self.den, self.den * rhs.den)
    }
}

impl Mul<i128> for Hz {
    type Output = Self;
    fn mul(self, k: i128) -> Self {
        Self::new(self.num * k, self.den)
    }
}

impl Ord for Hz {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl PartialOrd for Hz {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Hz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{} Hz", self.num)
        } else {
            write!(f, "{}/{} Hz", self.num, self.den)
        }
    }
}

impl fmt::Display for Hz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Hz {
    /// Whole hertz, rounded when the exact value is fractional.
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_i128(self.round_hz())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Hz {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        i128::deserialize(d).map(Hz::from_int)
    }
}

/// A spectral line and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tone {
    pub frequency: Hz,
    pub origin: String,
    /// Signed multiple of the modulation frequency relative to the optical
    /// carrier (sidebands) or the unsigned beat multiple (RF tones).
    #[cfg_attr(
        feature = "serde",
        serde(skip_serializing_if = "Option::is_none", default)
    )]
    pub order: Option<i32>,
}

impl Tone {
    pub fn new(frequency: Hz, origin: impl Into<String>) -> Self {
        Self {
            frequency,
            origin: origin.into(),
            order: None,
        }
    }
}

fn multiple_label(k: i32) -> String {
    if k == 1 {
        String::from("Ω")
    } else {
        format!("{k}Ω")
    }
}

/// Optical sidebands f_c ± k·f_mod, k = 1..=max_order, of a null-biased
/// modulator (carrier suppressed).
pub fn null_bias_sidebands(carrier: Hz, modulation: Hz, max_order: u32) -> Result<Vec<Tone>> {
    if !(1..=2).contains(&max_order) {
        return domain(
            "max_order",
            "only first- and second-order sidebands are supported",
        );
    }
    if modulation <= Hz::ZERO {
        return domain("modulation", "must be positive");
    }
    let mut tones = Vec::new();
    for k in (1..=max_order as i32).rev() {
        tones.push(Tone {
            frequency: carrier - modulation * k as i128,
            origin: format!("c-{}", multiple_label(k)),
            order: Some(-k),
        });
    }
    for k in 1..=max_order as i32 {
        tones.push(Tone {
            frequency: carrier + modulation * k as i128,
            origin: format!("c+{}", multiple_label(k)),
            order: Some(k),
        });
    }
    Ok(tones)
}

/// All distinct non-zero pairwise difference frequencies, ascending. The
/// first pair to produce a frequency names it.
pub fn beat_tones(optical: &[Tone]) -> Result<Vec<Tone>> {
    if optical.len() < 2 {
        return domain("optical", "need at least two tones to beat");
    }
    let mut beats: Vec<Tone> = Vec::new();
    for (i, a) in optical.iter().enumerate() {
        for b in &optical[i + 1..] {
            let f = (a.frequency - b.frequency).abs();
            if f == Hz::ZERO || beats.iter().any(|t| t.frequency == f) {
                continue;
            }
            let (origin, order) = match (a.order, b.order) {
                (Some(ka), Some(kb)) => {
                    let k = (ka - kb).abs();
                    (multiple_label(k), Some(k))
                }
                _ => (format!("|{} - {}|", a.origin, b.origin), None),
            };
            beats.push(Tone {
                frequency: f,
                origin,
                order,
            });
        }
    }
    beats.sort_by_key(|t| t.frequency);
    Ok(beats)
}

/// Hard high-pass at `cutoff`; tones at or above it survive, in order.
pub fn waveguide_filter(tones: &[Tone], cutoff: Hz) -> Vec<Tone> {
    tones
        .iter()
        .filter(|t| t.frequency >= cutoff)
        .cloned()
        .collect()
}

/// LO frequency (f_RF − f_IF)/N for harmonic-N down-conversion to f_IF.
pub fn solve_lo(rf: Hz, harmonic: u32, intermediate: Hz) -> Result<Hz> {
    if harmonic == 0 {
        return domain("harmonic", "must be at least 1");
    }
    if rf <= intermediate {
        return domain("rf", "must exceed the intermediate frequency");
    }
    Ok((rf - intermediate).div_int(harmonic as i128))
}

/// A complete up/down-conversion frequency plan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MixPlan {
    /// Modulator drive Ω.
    pub modulation: Hz,
    pub lo: Hz,
    pub harmonic: u32,
    pub intermediate: Hz,
    pub rf: Hz,
    pub cutoff: Hz,
    pub propagating_tones: Vec<Tone>,
    /// Distance from the IF to the nearest spur, if any non-target tone
    /// propagates.
    pub spur_margin: Option<Hz>,
}

impl MixPlan {
    /// f_RF − N·f_LO, which equals `intermediate` for a consistent plan.
    pub fn derived_intermediate(&self) -> Hz {
        self.rf - self.lo * self.harmonic as i128
    }

    fn spur_candidates(&self, max_harmonic: u32) -> impl Iterator<Item = SpurHit> + '_ {
        self.propagating_tones
            .iter()
            .filter(move |t| t.frequency != self.rf)
            .flat_map(move |t| {
                (1..=max_harmonic).map(move |m| {
                    let product = (t.frequency - self.lo * m as i128).abs();
                    SpurHit {
                        tone: t.clone(),
                        harmonic: m,
                        offset: (product - self.intermediate).abs(),
                    }
                })
            })
    }
}

/// A mixing product that lands near the IF.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SpurHit {
    pub tone: Tone,
    pub harmonic: u32,
    /// | |f_tone − M·f_LO| − f_IF |
    pub offset: Hz,
}

/// Mixing products of non-target propagating tones with LO harmonics
/// 1..=max_harmonic that fall within `guard` of the IF. Empty means clean.
pub fn spur_check(plan: &MixPlan, max_harmonic: u32, guard: Hz) -> Vec<SpurHit> {
    plan.spur_candidates(max_harmonic)
        .filter(|hit| hit.offset <= guard)
        .collect()
}

fn spur_margin(plan: &MixPlan, max_harmonic: u32) -> Option<Hz> {
    plan.spur_candidates(max_harmonic).map(|h| h.offset).min()
}

/// Spectroscopy plan: modulation Ω = f_RF/(2·order) so the outermost
/// sidebands beat at the target, LO from [`solve_lo`], and the tones that
/// survive the waveguide cutoff.
pub fn plan_spectroscopy(
    rf_target: Hz,
    harmonic: u32,
    intermediate: Hz,
    cutoff: Hz,
    sideband_order: u32,
) -> Result<MixPlan> {
    plan_spectroscopy_with_carrier(
        rf_target,
        harmonic,
        intermediate,
        cutoff,
        sideband_order,
        DEFAULT_OPTICAL_CARRIER,
    )
}

pub fn plan_spectroscopy_with_carrier(
    rf_target: Hz,
    harmonic: u32,
    intermediate: Hz,
    cutoff: Hz,
    sideband_order: u32,
    carrier: Hz,
) -> Result<MixPlan> {
    if !(1..=2).contains(&sideband_order) {
        return domain("sideband_order", "must be 1 or 2");
    }
    if rf_target < cutoff {
        return domain("rf_target", "lies below the waveguide cutoff");
    }
    let modulation = rf_target.div_int(2 * sideband_order as i128);
    let lo = solve_lo(rf_target, harmonic, intermediate)?;
    let sidebands = null_bias_sidebands(carrier, modulation, sideband_order)?;
    let propagating_tones = waveguide_filter(&beat_tones(&sidebands)?, cutoff);
    let mut plan = MixPlan {
        modulation,
        lo,
        harmonic,
        intermediate,
        rf: rf_target,
        cutoff,
        propagating_tones,
        spur_margin: None,
    };
    plan.spur_margin = spur_margin(&plan, DEFAULT_MAX_HARMONIC.max(harmonic));
    Ok(plan)
}

/// Modulation frequencies needed to cover `band` with the given sideband
/// order.
pub fn modulation_range(band: (Hz, Hz), sideband_order: u32) -> Result<(Hz, Hz)> {
    if !(1..=2).contains(&sideband_order) {
        return domain("sideband_order", "must be 1 or 2");
    }
    let k = 2 * sideband_order as i128;
    Ok((band.0.div_int(k), band.1.div_int(k)))
}

/// Same-LO, fixed-IF plan.
///
/// One synthesizer at f_LO feeds an IQ up-converter (f_RF = f_LO + f_IF),
/// a ×2 multiplier drives the modulator at Ω = 2·f_RF, and the ±2Ω
/// sidebands beat at 4Ω = 8·f_RF. The same LO at harmonic 8 mixes this back
/// down to 8·f_IF whatever the LO frequency.
pub fn slfi_plan(mmw_target: Hz, if_drive: Hz) -> Result<MixPlan> {
    if mmw_target <= Hz::ZERO {
        return domain("mmw_target", "must be positive");
    }
    if if_drive.is_negative() {
        return domain("if_drive", "must be non-negative");
    }
    let lo = mmw_target.div_int(SLFI_HARMONIC as i128) - if_drive;
    if lo <= Hz::ZERO {
        return domain("if_drive", "leaves no positive LO frequency");
    }
    let drive = lo + if_drive;
    let modulation = drive * 2;
    let rf = modulation * 4;
    let sidebands = null_bias_sidebands(DEFAULT_OPTICAL_CARRIER, modulation, 2)?;
    let propagating_tones = waveguide_filter(&beat_tones(&sidebands)?, WR10_CUTOFF);
    let mut plan = MixPlan {
        modulation,
        lo,
        harmonic: SLFI_HARMONIC,
        intermediate: rf - lo * SLFI_HARMONIC as i128,
        rf,
        cutoff: WR10_CUTOFF,
        propagating_tones,
        spur_margin: None,
    };
    plan.spur_margin = spur_margin(&plan, DEFAULT_MAX_HARMONIC);
    Ok(plan)
}
