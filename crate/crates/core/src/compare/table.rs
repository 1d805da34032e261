//! Three-way architecture comparison at a target resolution and rate.

use std::fmt::Write;

use crate::characterize::{gen_tone, spectrum, DEFAULT_HARMONICS};
use crate::error::{AdcError, Result};
use crate::model::AdcConfig;
use crate::pipeline::convert_waveform;

use super::flash::{flash_montecarlo, FlashConfig};
use super::sigma_delta::{sd_first_order, SdConfig};

/// Largest oversampling ratio tried when searching for the sigma-delta row.
pub const MAX_SD_OSR: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct CompareSpec {
    pub n_bits: u32,
    pub fs: f64,
    pub flash_sigma: f64,
    pub flash_trials: usize,
    pub seed: u64,
    pub sd_amplitude: f64,
    pub sd_samples: usize,
    /// Converter used for the pipeline row.
    pub pipeline: AdcConfig,
}

impl Default for CompareSpec {
    fn default() -> Self {
        Self {
            n_bits: 8,
            fs: crate::model::DEFAULT_FS,
            flash_sigma: 0.01,
            flash_trials: 1000,
            seed: 0,
            sd_amplitude: 0.5,
            sd_samples: 1 << 16,
            pipeline: AdcConfig::ideal(),
        }
    }
}

impl CompareSpec {
    /// SNR of an ideal `n_bits` quantizer for a full-scale sine.
    pub fn target_snr_db(&self) -> f64 {
        6.02 * f64::from(self.n_bits) + 1.76
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArchRow {
    pub architecture: &'static str,
    pub metric: &'static str,
    /// `None` when the architecture cannot reach the target in the searched range.
    pub value: Option<f64>,
    /// Clock the core circuit must run at to deliver `fs`.
    pub internal_clock_hz: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ArchRow>,
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl ComparisonTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("architecture,metric,value,internal_clock_hz,note\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},\"{}\"",
                r.architecture,
                r.metric,
                cell(r.value),
                cell(r.internal_clock_hz),
                r.note.replace('"', "\"\"")
            )
            .unwrap();
        }
        out
    }

    /// Column-aligned plain text.
    pub fn to_text(&self) -> String {
        let header = ["architecture", "metric", "value", "internal_clock_hz", "note"];
        let body: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.architecture.to_string(),
                    r.metric.to_string(),
                    r.value.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
                    r.internal_clock_hz.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into()),
                    r.note.clone(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
        };
        line(header.to_vec());
        for row in &body {
            line(row.iter().map(String::as_str).collect());
        }
        out
    }
}

fn pipeline_row(spec: &CompareSpec) -> Result<ArchRow> {
    let cfg = AdcConfig {
        fs: spec.fs,
        ..spec.pipeline.clone()
    };
    let tone = gen_tone(8192, cfg.fs, cfg.fs / 16.0, cfg.vref, true)?;
    let dm = spectrum(&convert_waveform(&tone.samples, &cfg)?, DEFAULT_HARMONICS)?;
    Ok(ArchRow {
        architecture: "pipeline",
        metric: "enob_bits",
        value: Some(dm.enob_bits),
        internal_clock_hz: Some(cfg.fs),
        note: format!(
            "8-bit pipeline simulated at fs, SNDR {:.2} dB; 1 SHA + 6 stages on {} OTAs",
            dm.sndr_db,
            if cfg.ota_sharing { 4 } else { 7 }
        ),
    })
}

fn sigma_delta_row(spec: &CompareSpec) -> Result<ArchRow> {
    let target = spec.target_snr_db();
    let mut osr = 4;
    let mut best = None;
    while osr <= MAX_SD_OSR {
        let cfg = SdConfig {
            osr,
            n_samples: spec.sd_samples,
            input_amplitude: spec.sd_amplitude,
        };
        let r = sd_first_order(&cfg, 0.125 / osr as f64)?;
        if r.snr_db >= target {
            best = Some((osr, r.snr_db));
            break;
        }
        osr *= 2;
    }
    Ok(match best {
        Some((osr, snr)) => ArchRow {
            architecture: "sigma_delta",
            metric: "required_osr",
            value: Some(osr as f64),
            internal_clock_hz: Some(spec.fs * osr as f64),
            note: format!("first-order 1-bit loop reaches {snr:.2} dB >= {target:.2} dB in band"),
        },
        None => ArchRow {
            architecture: "sigma_delta",
            metric: "required_osr",
            value: None,
            internal_clock_hz: None,
            note: format!("first-order loop does not reach {target:.2} dB up to OSR {MAX_SD_OSR}"),
        },
    })
}

fn flash_row(spec: &CompareSpec) -> Result<ArchRow> {
    let summary = flash_montecarlo(&FlashConfig {
        n_bits: spec.n_bits,
        ladder_sigma: spec.flash_sigma,
        n_trials: spec.flash_trials,
        rng_seed: spec.seed,
    })?;
    Ok(ArchRow {
        architecture: "flash",
        metric: "mean_max_inl_lsb",
        value: Some(summary.mean_max_inl),
        internal_clock_hz: Some(spec.fs),
        note: format!(
            "{} comparators; ladder sigma {}; worst trial {:.4} LSB over {} trials",
            (1u32 << spec.n_bits) - 1,
            spec.flash_sigma,
            summary.max_max_inl,
            spec.flash_trials
        ),
    })
}

/// One row per architecture, each cell produced by the matching simulator.
pub fn compare_architectures(spec: &CompareSpec) -> Result<ComparisonTable> {
    if !(spec.fs.is_finite() && spec.fs > 0.0) {
        return Err(AdcError::InvalidArgument(format!("fs must be > 0, got {}", spec.fs)));
    }
    if !(1..=8).contains(&spec.n_bits) {
        return Err(AdcError::InvalidArgument(format!("n_bits must be 1..=8, got {}", spec.n_bits)));
    }
    Ok(ComparisonTable {
        rows: vec![sigma_delta_row(spec)?, flash_row(spec)?, pipeline_row(spec)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_rate() {
        let spec = CompareSpec {
            fs: 0.0,
            ..CompareSpec::default()
        };
        assert!(compare_architectures(&spec).is_err());
    }

    #[test]
    fn csv_quotes_notes() {
        let t = ComparisonTable {
            rows: vec![ArchRow {
                architecture: "flash",
                metric: "m",
                value: None,
                internal_clock_hz: Some(1.0),
                note: "a, \"b\"".into(),
            }],
        };
        assert_eq!(
            t.to_csv(),
            "architecture,metric,value,internal_clock_hz,note\nflash,m,,1,\"a, \"\"b\"\"\"\n"
        );
        assert!(t.to_text().starts_with("architecture"));
    }
}
