//! Coherent-tone spectral analysis: SNDR, SFDR, THD, ENOB.

use rustfft::num_complex::Complex;
use rustfft::FftPlannerScalar;

use crate::error::{AdcError, Result};
use crate::pipeline::CodeStream;

pub const MIN_RECORD: usize = 1024;
pub const DEFAULT_HARMONICS: usize = 5;

/// Clamp for ratios against an exactly-zero denominator.
const DB_LIMIT: f64 = 300.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicMetrics {
    pub sndr_db: f64,
    pub sfdr_db: f64,
    /// Harmonic power relative to the fundamental, dBc (negative).
    pub thd_db: f64,
    pub enob_bits: f64,
    pub fundamental_bin: usize,
    pub worst_spur_bin: usize,
}

/// One-sided power spectrum together with the metrics derived from it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumAnalysis {
    /// Power per bin `0..=n/2`, in squared input units; DC removed.
    pub power: Vec<f64>,
    pub metrics: DynamicMetrics,
}

impl SpectrumAnalysis {
    /// Bin powers relative to the fundamental, dBc.
    pub fn bins_dbc(&self) -> Vec<f64> {
        let fund = self.power[self.metrics.fundamental_bin];
        self.power.iter().map(|&p| ratio_db(p, fund)).collect()
    }
}

pub fn enob_from_sndr(sndr_db: f64) -> f64 {
    (sndr_db - 1.76) / 6.02
}

fn ratio_db(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        return DB_LIMIT;
    }
    if num <= 0.0 {
        return -DB_LIMIT;
    }
    (10.0 * (num / den).log10()).clamp(-DB_LIMIT, DB_LIMIT)
}

/// Bin of the `k`-th harmonic of `fundamental`, folded into `0..=n/2`.
pub fn harmonic_bin(fundamental: usize, k: usize, n: usize) -> usize {
    let b = (fundamental * k) % n;
    if b > n / 2 {
        n - b
    } else {
        b
    }
}

/// One-sided power spectrum of the mean-removed record. The bins sum to the
/// record's variance (Parseval).
pub fn power_spectrum(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    FftPlannerScalar::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (n as f64 * n as f64);
    let half = n / 2;
    (0..=half)
        .map(|k| {
            let p = buf[k].norm_sqr() * scale;
            if k == 0 || k == half {
                p
            } else {
                2.0 * p
            }
        })
        .collect()
}

/// Spectral metrics of a real-valued coherent record. No window is applied.
pub fn analyze_spectrum(samples: &[f64], n_harmonics: usize) -> Result<SpectrumAnalysis> {
    let n = samples.len();
    if n < MIN_RECORD || !n.is_power_of_two() {
        return Err(AdcError::InvalidArgument(format!(
            "spectrum needs a power-of-two record of at least {MIN_RECORD} samples, got {n}"
        )));
    }
    if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
        return Err(AdcError::NonFinite { index });
    }
    let mut power = power_spectrum(samples);
    power[0] = 0.0;
    let total: f64 = power.iter().sum();
    if total <= 0.0 {
        return Err(AdcError::NoFundamental);
    }
    let (fundamental_bin, p_sig) = power
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, f64::MIN), |best, (k, &p)| if p > best.1 { (k, p) } else { best });
    let p_nd: f64 = power
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(k, _)| k != fundamental_bin)
        .map(|(_, &p)| p)
        .sum();
    let (worst_spur_bin, p_spur) = power
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(k, _)| k != fundamental_bin)
        .fold((0, 0.0), |best, (k, &p)| if p > best.1 { (k, p) } else { best });

    let mut harmonic_bins: Vec<usize> = (2..=n_harmonics + 1)
        .map(|k| harmonic_bin(fundamental_bin, k, n))
        .filter(|&b| b != 0 && b != fundamental_bin)
        .collect();
    harmonic_bins.sort_unstable();
    harmonic_bins.dedup();
    let p_harm: f64 = harmonic_bins.iter().map(|&b| power[b]).sum();

    let sndr_db = ratio_db(p_sig, p_nd);
    Ok(SpectrumAnalysis {
        metrics: DynamicMetrics {
            sndr_db,
            sfdr_db: ratio_db(p_sig, p_spur),
            thd_db: ratio_db(p_harm, p_sig),
            enob_bits: enob_from_sndr(sndr_db),
            fundamental_bin,
            worst_spur_bin,
        },
        power,
    })
}

/// Spectral metrics of a converter output record.
pub fn spectrum(codes: &CodeStream, n_harmonics: usize) -> Result<DynamicMetrics> {
    Ok(analyze_spectrum(&codes.as_f64(), n_harmonics)?.metrics)
}
