mod common;

use photolink_core::freqplan::*;
use proptest::prelude::*;

fn ghz(x: i128) -> Hz {
    Hz::from_int(x * 1_000_000_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn beats_ignore_translation(omega in 1_000_000i128..60_000_000_000, shift in -1_000_000_000_000i128..1_000_000_000_000, order in 1u32..=2) {
        let carrier = DEFAULT_OPTICAL_CARRIER;
        let a = beat_tones(&null_bias_sidebands(carrier, Hz::from_int(omega), order).unwrap()).unwrap();
        let b = beat_tones(&null_bias_sidebands(carrier + Hz::from_int(shift), Hz::from_int(omega), order).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn filter_is_idempotent(omega in 1_000_000i128..60_000_000_000, cutoff in 1_000_000_000i128..200_000_000_000) {
        let tones = beat_tones(&null_bias_sidebands(DEFAULT_OPTICAL_CARRIER, Hz::from_int(omega), 2).unwrap()).unwrap();
        let once = waveguide_filter(&tones, Hz::from_int(cutoff));
        prop_assert_eq!(waveguide_filter(&once, Hz::from_int(cutoff)), once);
    }

    #[test]
    fn plan_reproduces_requested_if(rf in 75_000_000_000i128..110_000_000_000, n in 4u32..=16, fif in 1_000_000i128..2_000_000_000) {
        if let Ok(plan) = plan_spectroscopy(Hz::from_int(rf), n, Hz::from_int(fif), WR10_CUTOFF, 2) {
            prop_assert_eq!(plan.derived_intermediate(), Hz::from_int(fif));
            prop_assert_eq!(plan.lo, solve_lo(Hz::from_int(rf), n, Hz::from_int(fif)).unwrap());
        }
    }
}

#[test]
fn slfi_output_is_fixed_over_ten_thousand_targets() {
    let mut rng = common::rng(77);
    let f_if = Hz::from_int(50_000_000);
    for _ in 0..10_000 {
        let target = Hz::from_int(common::range(&mut rng, 75e9, 110e9) as i128);
        let plan = slfi_plan(target, f_if).unwrap();
        assert_eq!(plan.intermediate, f_if * 8);
    }
}

#[test]
fn w_band_by_second_order_sidebands() {
    let (lo, hi) = modulation_range(WR10_BAND, 2).unwrap();
    assert_eq!(lo, Hz::new(75_000_000_000, 4));
    assert_eq!(hi, ghz(110).div_int(4));
}
