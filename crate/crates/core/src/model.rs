//! Transfer functions of the analog building blocks.
//!
//! Everything here is a pure function of its arguments. Stage-level functions
//! work on voltages normalized to the reference (`x = v / vref`, full scale
//! `[-1, 1]`); the sample-and-hold works in volts.

use crate::error::{AdcError, Result};

/// Number of 1.5-bit stages between the SHA and the 2-bit flash backend.
pub const STAGE_COUNT: usize = 6;
/// Output resolution of the converter.
pub const OUTPUT_BITS: u32 = 8;
pub const DEFAULT_VREF: f64 = 0.6;
pub const DEFAULT_FS: f64 = 166.6e6;

/// Sub-ADC thresholds of a 1.5-bit stage, normalized.
const STAGE_THRESHOLD: f64 = 0.25;
/// Backend flash thresholds, normalized.
const FLASH_THRESHOLDS: [f64; 3] = [-0.5, 0.0, 0.5];

/// The two non-overlapping half-period clock phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClockPhase {
    /// Sampling phase of the SHA.
    Ck1,
    /// Hold/amplify phase of the SHA.
    Ck2,
}

impl ClockPhase {
    pub const ALL: [ClockPhase; 2] = [ClockPhase::Ck1, ClockPhase::Ck2];

    pub fn other(self) -> Self {
        match self {
            ClockPhase::Ck1 => ClockPhase::Ck2,
            ClockPhase::Ck2 => ClockPhase::Ck1,
        }
    }

    /// Each phase lasts half the sample period.
    pub fn duration(fs: f64) -> f64 {
        0.5 / fs
    }
}

/// Non-idealities of one amplifying block (SHA or 1.5-bit stage).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct StageParams {
    /// Relative deviation of the block gain from ideal (2 for a stage, 1 for the SHA).
    pub gain_error: f64,
    /// Output-referred offset in volts.
    pub offset: f64,
    /// Settling time constant in seconds; zero settles instantly.
    pub tau: f64,
    /// Shifts of the lower and upper sub-ADC comparator thresholds, in volts.
    pub cmp_threshold_shift: [f64; 2],
}

impl StageParams {
    pub const IDEAL: StageParams = StageParams {
        gain_error: 0.0,
        offset: 0.0,
        tau: 0.0,
        cmp_threshold_shift: [0.0, 0.0],
    };

    fn validate(&self, block: &str) -> Result<()> {
        let finite = [
            self.gain_error,
            self.offset,
            self.tau,
            self.cmp_threshold_shift[0],
            self.cmp_threshold_shift[1],
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(AdcError::InvalidConfig(format!("{block}: non-finite parameter")));
        }
        if self.tau < 0.0 {
            return Err(AdcError::InvalidConfig(format!("{block}: tau must be >= 0")));
        }
        if self.gain_error.abs() >= 0.5 {
            return Err(AdcError::InvalidConfig(format!(
                "{block}: |gain_error| must be < 0.5"
            )));
        }
        Ok(())
    }
}

/// Full description of the converter.
#[derive(Clone, Debug, PartialEq)]
pub struct AdcConfig {
    /// Full-scale reference; the analog range is `[-vref, vref]`.
    pub vref: f64,
    /// Sample-and-hold non-idealities (gain error relative to unity gain).
    pub sha: StageParams,
    /// Input-dependent sampling-instant skew of the SHA in seconds at full
    /// scale: the effective sampling instant moves by `skew * (v/vref)^2`.
    pub sha_aperture_skew: f64,
    pub stages: [StageParams; STAGE_COUNT],
    /// Backend flash comparator threshold shifts, volts.
    pub flash_threshold_shifts: [f64; 3],
    /// Sampling frequency in hertz.
    pub fs: f64,
    pub ota_sharing: bool,
    /// Fraction of the partner stage's previous output added to a stage's
    /// settling start point when two stages share an OTA.
    pub sharing_memory: f64,
    /// Input-referred Gaussian noise, volts RMS.
    pub noise_sigma: f64,
    pub noise_seed: u64,
}

impl Default for AdcConfig {
    fn default() -> Self {
        Self::ideal()
    }
}

impl AdcConfig {
    /// Design point with every non-ideality switched off.
    pub fn ideal() -> Self {
        Self {
            vref: DEFAULT_VREF,
            sha: StageParams::IDEAL,
            sha_aperture_skew: 0.0,
            stages: [StageParams::IDEAL; STAGE_COUNT],
            flash_threshold_shifts: [0.0; 3],
            fs: DEFAULT_FS,
            ota_sharing: true,
            sharing_memory: 0.0,
            noise_sigma: 0.0,
            noise_seed: 0,
        }
    }

    /// Same converter geometry with all error sources zeroed.
    pub fn without_impairments(&self) -> Self {
        Self {
            vref: self.vref,
            fs: self.fs,
            ota_sharing: self.ota_sharing,
            noise_seed: self.noise_seed,
            ..Self::ideal()
        }
    }

    /// Time available to each amplifier for settling.
    pub fn settling_window(&self) -> f64 {
        ClockPhase::duration(self.fs)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vref.is_finite() && self.vref > 0.0) {
            return Err(AdcError::InvalidConfig("vref must be > 0".into()));
        }
        if !(self.fs.is_finite() && self.fs > 0.0) {
            return Err(AdcError::InvalidConfig("fs must be > 0".into()));
        }
        self.sha.validate("sha")?;
        for (i, stage) in self.stages.iter().enumerate() {
            stage.validate(&format!("stage {}", i + 1))?;
        }
        let scalars = [
            self.sha_aperture_skew,
            self.sharing_memory,
            self.noise_sigma,
            self.flash_threshold_shifts[0],
            self.flash_threshold_shifts[1],
            self.flash_threshold_shifts[2],
        ];
        if !scalars.iter().all(|v| v.is_finite()) {
            return Err(AdcError::InvalidConfig("non-finite parameter".into()));
        }
        if self.noise_sigma < 0.0 {
            return Err(AdcError::InvalidConfig("noise_sigma must be >= 0".into()));
        }
        Ok(())
    }
}

/// Coarse 1.5-bit decision. Inputs exactly on a threshold take the middle code.
pub fn stage_decide(x: f64, threshold_shifts: [f64; 2]) -> u8 {
    let low = -STAGE_THRESHOLD + threshold_shifts[0];
    let high = STAGE_THRESHOLD + threshold_shifts[1];
    if x > high {
        2
    } else if x < low {
        0
    } else {
        1
    }
}

/// Amplifier target of the multiplying DAC: `(1 + g)(2x - d) + offset/vref`
/// with `d = c - 1`. Settling is applied separately.
pub fn mdac_residue(x: f64, c: u8, params: &StageParams, vref: f64) -> f64 {
    debug_assert!(c <= 2, "sub-code out of range: {c}");
    let d = f64::from(c) - 1.0;
    (1.0 + params.gain_error) * (2.0 * x - d) + params.offset / vref
}

/// Single-pole settling from `previous` toward `target` over `t_avail`.
pub fn settle(target: f64, previous: f64, tau: f64, t_avail: f64) -> f64 {
    if tau == 0.0 {
        return target;
    }
    target - (target - previous) * (-t_avail / tau).exp()
}

/// Result of one SHA acquisition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShaSample {
    pub held: f64,
    /// The input exceeded `±vref` and was saturated.
    pub clipped: bool,
}

/// Sample-and-hold acquisition of `vin` (volts).
///
/// `slope` is the input's rate of change at the sampling instant in V/s; it
/// only matters when the aperture skew is non-zero.
pub fn sha_sample(vin: f64, slope: f64, cfg: &AdcConfig, previous_held: f64) -> ShaSample {
    let clipped = vin.abs() > cfg.vref;
    let v = vin.clamp(-cfg.vref, cfg.vref);
    let x = v / cfg.vref;
    let aperture_error = cfg.sha_aperture_skew * x * x * slope;
    let target = v * (1.0 + cfg.sha.gain_error) + cfg.sha.offset - aperture_error;
    ShaSample {
        held: settle(target, previous_held, cfg.sha.tau, cfg.settling_window()),
        clipped,
    }
}

/// 2-bit backend quantizer; a tie with a threshold goes to the upper code.
pub fn flash2b_quantize(x: f64, threshold_shifts: [f64; 3]) -> u8 {
    FLASH_THRESHOLDS
        .iter()
        .zip(threshold_shifts)
        .filter(|&(&t, shift)| x >= t + shift)
        .count() as u8
}
