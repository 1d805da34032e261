use pipeline_adc::compare::{
    ladder_max_inl, walden_fom, ArchRow, REFERENCE_ENOB, REFERENCE_TOTAL_MW,
};
use pipeline_adc::{
    compare_architectures, flash_montecarlo, power_model, sd_first_order, AdcConfig, CompareSpec,
    FlashConfig, PowerCalibration, SdConfig,
};
use proptest::prelude::*;

fn sd_snr(osr: usize) -> f64 {
    let cfg = SdConfig {
        osr,
        n_samples: 1 << 16,
        input_amplitude: 0.5,
    };
    sd_first_order(&cfg, 0.0005).unwrap().snr_db
}

#[test]
fn sigma_delta_gains_per_octave() {
    let snr: Vec<f64> = [8, 16, 32, 64, 128].into_iter().map(sd_snr).collect();
    for w in snr.windows(2) {
        let gain = w[1] - w[0];
        assert!((6.0..=12.0).contains(&gain), "{snr:?}");
    }
    // first-order shaping: about 9 dB per octave on average
    let mean = (snr[4] - snr[0]) / 4.0;
    assert!((mean - 9.0).abs() < 1.5, "{mean}");
}

fn flash(sigma: f64, seed: u64) -> f64 {
    flash_montecarlo(&FlashConfig {
        n_bits: 8,
        ladder_sigma: sigma,
        n_trials: 1000,
        rng_seed: seed,
    })
    .unwrap()
    .mean_max_inl
}

#[test]
fn flash_inl_rises_with_mismatch() {
    assert_eq!(flash(0.0, 3), 0.0);
    let m: Vec<f64> = [0.001, 0.01, 0.05].into_iter().map(|s| flash(s, 3)).collect();
    assert!(m[0] < m[1] && m[1] < m[2], "{m:?}");
    assert_eq!(flash(0.01, 3), m[1]);
}

#[test]
fn ladder_inl_oracle() {
    // taps at 2/5, 3/5, 4/5 of full scale instead of 1/4, 2/4, 3/4
    let inl = ladder_max_inl(&[2.0, 1.0, 1.0, 1.0]);
    assert!((inl - 0.6).abs() < 1e-12, "{inl}");
}

#[test]
fn power_sum_and_sharing() {
    let cal = PowerCalibration::default();
    let on = power_model(&AdcConfig::ideal(), &cal, REFERENCE_ENOB).unwrap();
    let off_cfg = AdcConfig {
        ota_sharing: false,
        ..AdcConfig::ideal()
    };
    let off = power_model(&off_cfg, &cal, REFERENCE_ENOB).unwrap();
    assert_eq!((on.ota_count, off.ota_count), (4, 7));
    assert!((on.total_mw - REFERENCE_TOTAL_MW).abs() < 1e-9);
    assert!((off.total_mw - on.total_mw - 3.0 * cal.p_ota_mw).abs() < 1e-9);
    assert!((on.fom_pj_per_step - 1.45).abs() < 0.01);
    let fom = 38.9e-3 / (2f64.powf(7.33) * 166.6e6) * 1e12;
    assert!((on.fom_pj_per_step - fom).abs() < 1e-12);
}

#[test]
fn default_comparison_table() {
    let t = compare_architectures(&CompareSpec::default()).unwrap();
    let row = |name: &str| -> &ArchRow { t.rows.iter().find(|r| r.architecture == name).unwrap() };
    let sd = row("sigma_delta");
    let osr = sd.value.unwrap();
    assert!(osr >= 64.0);
    assert_eq!(sd.internal_clock_hz.unwrap(), 166.6e6 * osr);
    assert!(row("pipeline").value.unwrap() >= 7.9);
    let fl = row("flash").value.unwrap();
    assert_eq!(fl, flash(0.01, 0));
    assert_eq!(t, compare_architectures(&CompareSpec::default()).unwrap());
}

#[test]
fn one_bit_flash_without_mismatch_is_exact() {
    let spec = CompareSpec {
        n_bits: 1,
        flash_sigma: 0.0,
        flash_trials: 10,
        ..CompareSpec::default()
    };
    let t = compare_architectures(&spec).unwrap();
    let fl = t.rows.iter().find(|r| r.architecture == "flash").unwrap();
    assert_eq!(fl.value, Some(0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fom_inverse_in_rate(fs in 1e6f64..1e9, enob in 4.0f64..12.0) {
        let cfg = AdcConfig { fs, ..AdcConfig::ideal() };
        let half = AdcConfig { fs: fs / 2.0, ..AdcConfig::ideal() };
        let cal = PowerCalibration::default();
        let a = power_model(&cfg, &cal, enob).unwrap();
        let b = power_model(&half, &cal, enob).unwrap();
        prop_assert!((b.fom_pj_per_step / a.fom_pj_per_step - 2.0).abs() < 1e-12);
        prop_assert!((a.total_mw - (4.0 * cal.p_ota_mw + cal.p_comparators_mw + cal.p_digital_clock_mw)).abs() < 1e-12);
        prop_assert_eq!(a.fom_pj_per_step, walden_fom(a.total_mw * 1e-3, enob, fs) * 1e12);
    }

    #[test]
    fn flash_reproducible(seed in any::<u64>()) {
        let cfg = FlashConfig { n_bits: 6, ladder_sigma: 0.02, n_trials: 50, rng_seed: seed };
        prop_assert_eq!(flash_montecarlo(&cfg).unwrap(), flash_montecarlo(&cfg).unwrap());
    }
}
