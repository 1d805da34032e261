//! Reference operating point of the design and the settling-constant fit.

use crate::error::{AdcError, Result};
use crate::model::{AdcConfig, ClockPhase, STAGE_COUNT};

/// Amplitude of the full-swing setup pulse, mV.
pub const REFERENCE_PULSE_MV: f64 = 600.0;

/// Target settled levels (mV) of SHA, Stage1..Stage6 after the rising edge of
/// the full-swing setup pulse.
pub const REFERENCE_SETUP_MV: [f64; 1 + STAGE_COUNT] =
    [599.7, 599.2, 598.5, 596.3, 593.9, 587.4, 575.6];

/// Residue gain error of stage 1 at the reference operating point.
pub const REFERENCE_STAGE1_GAIN_ERROR: f64 = 0.0075;

/// Sampling-instant skew of the SHA at the reference operating point, s.
pub const REFERENCE_APERTURE_SKEW: f64 = 180e-12;

/// Fits one time constant per block (SHA first) so that the steady-state
/// alternating pulse settles each block to the given level.
///
/// Block `i` is driven toward level `i - 1` (the pulse for the SHA) starting
/// from the negated level `i` of the previous half of the pulse, so
/// `sim = ideal - (ideal + sim) * e` with `e = exp(-T/2 / tau)`.
pub fn fit_setup_taus(levels_mv: &[f64; 1 + STAGE_COUNT], pulse_mv: f64, fs: f64) -> Result<[f64; 1 + STAGE_COUNT]> {
    if !(fs > 0.0 && pulse_mv > 0.0) {
        return Err(AdcError::InvalidArgument("fs and pulse amplitude must be > 0".into()));
    }
    let t_half = ClockPhase::duration(fs);
    let mut taus = [0.0; 1 + STAGE_COUNT];
    let mut ideal = pulse_mv;
    for (tau, &sim) in taus.iter_mut().zip(levels_mv) {
        if !(sim > 0.0 && sim <= ideal) {
            return Err(AdcError::InvalidArgument(format!(
                "settled level {sim} mV must lie in (0, {ideal}] mV"
            )));
        }
        let e = (ideal - sim) / (ideal + sim);
        *tau = if e == 0.0 { 0.0 } else { t_half / -e.ln() };
        ideal = sim;
    }
    Ok(taus)
}

impl AdcConfig {
    /// Ideal converter with the settling constants fitted to
    /// [`REFERENCE_SETUP_MV`].
    pub fn setup_calibrated() -> Self {
        let mut cfg = AdcConfig::ideal();
        let taus = fit_setup_taus(&REFERENCE_SETUP_MV, REFERENCE_PULSE_MV, cfg.fs)
            .expect("reference levels are valid");
        cfg.sha.tau = taus[0];
        for (stage, &tau) in cfg.stages.iter_mut().zip(&taus[1..]) {
            stage.tau = tau;
        }
        cfg
    }

    /// Reference operating point: fitted settling constants, a stage-1
    /// residue gain error and SHA sampling-instant skew. Mirrors
    /// `configs/paper_point.toml`.
    pub fn paper_point() -> Self {
        let mut cfg = Self::setup_calibrated();
        cfg.stages[0].gain_error = REFERENCE_STAGE1_GAIN_ERROR;
        cfg.sha_aperture_skew = REFERENCE_APERTURE_SKEW;
        cfg
    }
}
