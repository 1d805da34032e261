//! Whole-converter engine: SHA, six 1.5-bit stages, 2-bit flash and digital
//! error correction, plus the OTA-sharing clock schedule.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{AdcError, Result};
use crate::model::{
    flash2b_quantize, mdac_residue, settle, sha_sample, stage_decide, AdcConfig, ClockPhase,
    OUTPUT_BITS, STAGE_COUNT,
};

/// Per-stage sub-codes and the flash code of one conversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawStageCodes {
    pub stages: [u8; STAGE_COUNT],
    pub flash: u8,
}

impl RawStageCodes {
    pub fn new(stages: [u8; STAGE_COUNT], flash: u8) -> Result<Self> {
        if let Some(c) = stages.iter().find(|&&c| c > 2) {
            return Err(AdcError::InvalidArgument(format!("stage sub-code {c} not in 0..=2")));
        }
        if flash > 3 {
            return Err(AdcError::InvalidArgument(format!("flash code {flash} not in 0..=3")));
        }
        Ok(Self { stages, flash })
    }
}

/// Overlap-and-add alignment of the redundant codes into the output word:
/// `128 + sum((c_i - 1) * 2^(7-i)) + (f - 2)`, clamped to `0..=255`.
pub fn digital_error_correction(raw: &RawStageCodes) -> u8 {
    let mid = 1i32 << (OUTPUT_BITS - 1);
    let coarse: i32 = raw
        .stages
        .iter()
        .enumerate()
        .map(|(i, &c)| (i32::from(c) - 1) << (OUTPUT_BITS as usize - 2 - i))
        .sum();
    let code = mid + coarse + i32::from(raw.flash) - 2;
    code.clamp(0, (1 << OUTPUT_BITS) - 1) as u8
}

/// Debug record of one conversion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConversionTrace {
    pub input: f64,
    pub held: f64,
    /// Settled stage outputs in volts.
    pub residues: [f64; STAGE_COUNT],
    pub raw: RawStageCodes,
    pub code: u8,
    pub clipped: bool,
}

/// An amplifier that needs an OTA during its amplify phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Amplifier {
    Sha,
    /// 1-based stage index.
    Stage(usize),
}

/// Which OTA serves which amplifier in each clock phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OtaSchedule {
    /// Per phase, `(ota_id, amplifier)` pairs for every amplifier in amplify mode.
    pub assignments: BTreeMap<ClockPhase, Vec<(usize, Amplifier)>>,
    pub ota_count: usize,
}

impl OtaSchedule {
    pub fn amplifying(&self, phase: ClockPhase) -> Vec<Amplifier> {
        self.assignments
            .get(&phase)
            .map(|v| v.iter().map(|&(_, a)| a).collect())
            .unwrap_or_default()
    }

    pub fn ota_of(&self, amp: Amplifier) -> Option<usize> {
        self.assignments
            .values()
            .flatten()
            .find(|&&(_, a)| a == amp)
            .map(|&(ota, _)| ota)
    }

    /// Checks that no OTA has two clients in one phase, that every OTA id is
    /// in range, and that every amplifier is served exactly once per cycle.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut seen = BTreeMap::new();
        for (phase, list) in &self.assignments {
            let mut busy = vec![false; self.ota_count];
            for &(ota, amp) in list {
                if ota >= self.ota_count {
                    return Err(format!("{amp:?} uses OTA {ota} >= ota_count"));
                }
                if std::mem::replace(&mut busy[ota], true) {
                    return Err(format!("OTA {ota} has two clients in {phase:?}"));
                }
                *seen.entry(amp).or_insert(0usize) += 1;
            }
        }
        let expected = std::iter::once(Amplifier::Sha).chain((1..=STAGE_COUNT).map(Amplifier::Stage));
        for amp in expected {
            match seen.get(&amp) {
                Some(1) => {}
                Some(n) => return Err(format!("{amp:?} amplifies {n} times per cycle")),
                None => return Err(format!("{amp:?} never amplifies")),
            }
        }
        Ok(())
    }
}

/// Phase in which a block amplifies. The SHA holds in CK2; each following
/// stage lags its predecessor by half a cycle.
fn amplify_phase(amp: Amplifier) -> ClockPhase {
    match amp {
        Amplifier::Sha => ClockPhase::Ck2,
        Amplifier::Stage(i) if i % 2 == 1 => ClockPhase::Ck1,
        Amplifier::Stage(_) => ClockPhase::Ck2,
    }
}

/// Builds the OTA assignment. With sharing on, stages (1,2), (3,4) and (5,6)
/// share one OTA each; the SHA always has its own.
pub fn build_ota_schedule(cfg: &AdcConfig) -> OtaSchedule {
    let mut assignments: BTreeMap<ClockPhase, Vec<(usize, Amplifier)>> = BTreeMap::new();
    let sha = Amplifier::Sha;
    assignments.entry(amplify_phase(sha)).or_default().push((0, sha));
    for i in 1..=STAGE_COUNT {
        let ota = if cfg.ota_sharing { i.div_ceil(2) } else { i };
        let amp = Amplifier::Stage(i);
        assignments.entry(amplify_phase(amp)).or_default().push((ota, amp));
    }
    let ota_count = if cfg.ota_sharing { 1 + STAGE_COUNT / 2 } else { 1 + STAGE_COUNT };
    OtaSchedule {
        assignments,
        ota_count,
    }
}

/// Output codes with their sampling metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeStream {
    pub codes: Vec<u8>,
    pub fs: f64,
}

impl CodeStream {
    pub fn n_bits(&self) -> u32 {
        OUTPUT_BITS
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.codes.iter().map(|&c| f64::from(c)).collect()
    }
}

/// Stateful converter instance. Holds the previous cycle's settled outputs
/// (capacitor memory) and the noise generator.
#[derive(Clone, Debug)]
pub struct Converter {
    cfg: AdcConfig,
    held: f64,
    residues: [f64; STAGE_COUNT],
    noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
}

impl Converter {
    pub fn new(cfg: AdcConfig) -> Result<Self> {
        cfg.validate()?;
        let noise = if cfg.noise_sigma > 0.0 {
            Some(Normal::new(0.0, cfg.noise_sigma).map_err(|e| AdcError::InvalidConfig(e.to_string()))?)
        } else {
            None
        };
        let rng = ChaCha8Rng::seed_from_u64(cfg.noise_seed);
        Ok(Self {
            cfg,
            held: 0.0,
            residues: [0.0; STAGE_COUNT],
            noise,
            rng,
        })
    }

    pub fn config(&self) -> &AdcConfig {
        &self.cfg
    }

    /// Converts one sample. `slope` is the input slope in V/s at the sampling
    /// instant (used by the aperture-skew term only).
    pub fn convert_sample(&mut self, vin: f64, slope: f64) -> Result<ConversionTrace> {
        if !vin.is_finite() || !slope.is_finite() {
            return Err(AdcError::NonFinite { index: 0 });
        }
        let cfg = &self.cfg;
        let t_half = cfg.settling_window();
        let noisy = match &self.noise {
            Some(n) => vin + n.sample(&mut self.rng),
            None => vin,
        };
        let sha = sha_sample(noisy, slope, cfg, self.held);
        self.held = sha.held;

        let previous = self.residues;
        let mut x = sha.held / cfg.vref;
        let mut stages = [0u8; STAGE_COUNT];
        for (i, p) in cfg.stages.iter().enumerate() {
            let shifts = [p.cmp_threshold_shift[0] / cfg.vref, p.cmp_threshold_shift[1] / cfg.vref];
            let c = stage_decide(x, shifts);
            stages[i] = c;
            let target = mdac_residue(x, c, p, cfg.vref);
            let mut start = previous[i] / cfg.vref;
            if cfg.ota_sharing {
                start += cfg.sharing_memory * previous[i ^ 1] / cfg.vref;
            }
            x = settle(target, start, p.tau, t_half);
            self.residues[i] = x * cfg.vref;
        }
        let flash_shifts = cfg.flash_threshold_shifts.map(|s| s / cfg.vref);
        let raw = RawStageCodes {
            stages,
            flash: flash2b_quantize(x, flash_shifts),
        };
        Ok(ConversionTrace {
            input: vin,
            held: sha.held,
            residues: self.residues,
            raw,
            code: digital_error_correction(&raw),
            clipped: sha.clipped,
        })
    }
}

/// Central-difference slope estimate of a sampled input, in V/s.
pub fn input_slopes(samples: &[f64], fs: f64) -> Vec<f64> {
    let n = samples.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            if hi == lo {
                0.0
            } else {
                (samples[hi] - samples[lo]) * fs / (hi - lo) as f64
            }
        })
        .collect()
}

fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(AdcError::NonFinite { index }),
        None => Ok(()),
    }
}

/// Converts a waveform sample by sample, with per-conversion full traces.
pub fn trace_waveform(samples: &[f64], cfg: &AdcConfig) -> Result<Vec<ConversionTrace>> {
    if samples.is_empty() {
        return Err(AdcError::EmptyInput);
    }
    check_finite(samples)?;
    let mut conv = Converter::new(cfg.clone())?;
    let slopes = input_slopes(samples, cfg.fs);
    samples
        .iter()
        .zip(&slopes)
        .map(|(&v, &s)| conv.convert_sample(v, s))
        .collect()
}

/// Sequential conversion of a waveform; settling memory carries between samples.
pub fn convert_waveform(samples: &[f64], cfg: &AdcConfig) -> Result<CodeStream> {
    let codes = trace_waveform(samples, cfg)?.into_iter().map(|t| t.code).collect();
    Ok(CodeStream { codes, fs: cfg.fs })
}

/// Time-shares one converter between several pixel streams: round-robin
/// interleave, convert at `fs`, de-interleave. Each returned stream runs at
/// `fs / streams.len()`.
pub fn mux_pixels(streams: &[Vec<f64>], cfg: &AdcConfig) -> Result<Vec<CodeStream>> {
    let first = streams.first().ok_or(AdcError::EmptyInput)?;
    let len = first.len();
    if let Some((index, s)) = streams.iter().enumerate().find(|(_, s)| s.len() != len) {
        return Err(AdcError::RaggedStreams {
            index,
            len: s.len(),
            expected: len,
        });
    }
    let count = streams.len();
    let interleaved: Vec<f64> = (0..len)
        .flat_map(|k| streams.iter().map(move |s| s[k]))
        .collect();
    let all = convert_waveform(&interleaved, cfg)?;
    let per_pixel_fs = cfg.fs / count as f64;
    Ok((0..count)
        .map(|p| CodeStream {
            codes: all.codes.iter().skip(p).step_by(count).copied().collect(),
            fs: per_pixel_fs,
        })
        .collect())
}
