//! First-order single-bit sigma-delta modulator.

use std::f64::consts::PI;

use crate::characterize::power_spectrum;
use crate::error::{AdcError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdConfig {
    /// Oversampling ratio, a power of two >= 4.
    pub osr: usize,
    /// Record length in modulator clocks, a power of two.
    pub n_samples: usize,
    /// Input amplitude relative to the feedback levels (±1).
    pub input_amplitude: f64,
}

impl Default for SdConfig {
    fn default() -> Self {
        Self {
            osr: 64,
            n_samples: 1 << 16,
            input_amplitude: 0.5,
        }
    }
}

impl SdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.osr < 4 || !self.osr.is_power_of_two() {
            return Err(AdcError::InvalidArgument(format!(
                "osr must be a power of two >= 4, got {}",
                self.osr
            )));
        }
        if self.n_samples < 1024 || !self.n_samples.is_power_of_two() {
            return Err(AdcError::InvalidArgument(format!(
                "n_samples must be a power of two >= 1024, got {}",
                self.n_samples
            )));
        }
        if !(0.0..=0.9).contains(&self.input_amplitude) {
            return Err(AdcError::InvalidArgument(format!(
                "input amplitude must be in [0, 0.9], got {}",
                self.input_amplitude
            )));
        }
        Ok(())
    }

    /// Number of FFT bins in the signal band `[0, fs / (2 osr)]`.
    pub fn band_bins(&self) -> usize {
        self.n_samples / (2 * self.osr)
    }
}

/// `y[n] = y[n-1] + x[n] - q[n-1]`, `q[n] = +1 if y[n] >= 0 else -1`.
pub fn sd_modulate(input: &[f64]) -> Vec<f64> {
    let mut y = 0.0;
    let mut q = 0.0;
    input
        .iter()
        .map(|&x| {
            y += x - q;
            q = if y >= 0.0 { 1.0 } else { -1.0 };
            q
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdResult {
    pub snr_db: f64,
    /// Coherent tone frequency actually simulated, as a fraction of the clock.
    pub fin_normalized: f64,
    pub signal_bin: usize,
    pub band_bins: usize,
}

/// In-band SNR of the modulator for a coherent tone near `fin_normalized`
/// (fraction of the modulator clock). Every non-signal bin in
/// `1..=band_bins` counts as noise.
pub fn sd_first_order(cfg: &SdConfig, fin_normalized: f64) -> Result<SdResult> {
    cfg.validate()?;
    let n = cfg.n_samples;
    let band = cfg.band_bins();
    let edge = 0.5 / cfg.osr as f64;
    if !(fin_normalized > 0.0 && fin_normalized < edge) {
        return Err(AdcError::InvalidArgument(format!(
            "tone at {fin_normalized} of the clock lies outside the signal band (0, {edge})"
        )));
    }
    // odd bin keeps the record's phases distinct
    let mut bin = (fin_normalized * n as f64).round() as usize | 1;
    if bin > band {
        bin -= 2;
    }
    if bin == 0 || bin > band {
        return Err(AdcError::InvalidArgument("signal band too narrow for a coherent tone".into()));
    }
    if cfg.input_amplitude == 0.0 {
        return Err(AdcError::NoFundamental);
    }
    let input: Vec<f64> = (0..n)
        .map(|k| cfg.input_amplitude * (2.0 * PI * ((k * bin) % n) as f64 / n as f64).sin())
        .collect();
    let power = power_spectrum(&sd_modulate(&input));
    let signal = power[bin];
    let noise: f64 = (1..=band).filter(|&k| k != bin).map(|k| power[k]).sum();
    Ok(SdResult {
        snr_db: 10.0 * (signal / noise).log10(),
        fin_normalized: bin as f64 / n as f64,
        signal_bin: bin,
        band_bins: band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dc_zero_has_zero_mean() {
        let n = 4096;
        let bits = sd_modulate(&vec![0.0; n]);
        let mean = bits.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() <= 2.0 / n as f64);
    }

    #[test]
    fn dc_input_is_tracked_on_average() {
        let n = 1 << 14;
        let bits = sd_modulate(&vec![0.3; n]);
        let mean = bits.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.3).abs() < 4.0 / n as f64);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = SdConfig::default();
        assert!(sd_first_order(&cfg, 0.01).is_err());
        assert!(sd_first_order(&cfg, 0.0).is_err());
        let silent = SdConfig {
            input_amplitude: 0.0,
            ..cfg
        };
        assert_eq!(sd_first_order(&silent, 0.001), Err(AdcError::NoFundamental));
        assert!(SdConfig { osr: 3, ..cfg }.validate().is_err());
        assert!(SdConfig { osr: 48, ..cfg }.validate().is_err());
        assert!(SdConfig { input_amplitude: 0.95, ..cfg }.validate().is_err());
    }

    #[test]
    fn tone_snaps_to_odd_in_band_bin() {
        let cfg = SdConfig {
            osr: 128,
            ..SdConfig::default()
        };
        let r = sd_first_order(&cfg, 0.0005).unwrap();
        assert_eq!(r.signal_bin % 2, 1);
        assert!(r.signal_bin <= r.band_bins);
        assert_eq!(r.band_bins, 256);
    }
}
