//! Three-component power model and the Walden figure of merit.

use crate::error::{AdcError, Result};
use crate::model::AdcConfig;
use crate::pipeline::build_ota_schedule;

/// Total power of the OTA-sharing design point, mW.
pub const REFERENCE_TOTAL_MW: f64 = 38.9;
/// Effective resolution used for the figure of merit by default.
pub const REFERENCE_ENOB: f64 = 7.33;
/// Share of the total taken by the OTAs at the reference point.
pub const OTA_POWER_SHARE: f64 = 0.7;
pub const COMPARATOR_POWER_SHARE: f64 = 0.2;
pub const DIGITAL_POWER_SHARE: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerCalibration {
    pub p_ota_mw: f64,
    pub p_comparators_mw: f64,
    pub p_digital_clock_mw: f64,
}

impl Default for PowerCalibration {
    /// 70/20/10 split of the reference total across four OTAs, the
    /// comparators, and clock/digital logic.
    fn default() -> Self {
        Self {
            p_ota_mw: OTA_POWER_SHARE * REFERENCE_TOTAL_MW / 4.0,
            p_comparators_mw: COMPARATOR_POWER_SHARE * REFERENCE_TOTAL_MW,
            p_digital_clock_mw: DIGITAL_POWER_SHARE * REFERENCE_TOTAL_MW,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerReport {
    pub ota_count: usize,
    pub p_ota_mw: f64,
    pub p_comparators_mw: f64,
    pub p_digital_clock_mw: f64,
    pub total_mw: f64,
    pub fom_pj_per_step: f64,
}

/// Walden figure of merit, joules per conversion step.
pub fn walden_fom(power_w: f64, enob: f64, fs: f64) -> f64 {
    power_w / (2f64.powf(enob) * fs)
}

pub fn power_model(cfg: &AdcConfig, cal: &PowerCalibration, enob: f64) -> Result<PowerReport> {
    let parts = [cal.p_ota_mw, cal.p_comparators_mw, cal.p_digital_clock_mw];
    if !parts.iter().all(|p| p.is_finite() && *p >= 0.0) {
        return Err(AdcError::InvalidArgument("power components must be finite and >= 0".into()));
    }
    if !(cfg.fs.is_finite() && cfg.fs > 0.0) {
        return Err(AdcError::InvalidConfig("fs must be > 0".into()));
    }
    if !enob.is_finite() {
        return Err(AdcError::InvalidArgument("enob must be finite".into()));
    }
    let ota_count = build_ota_schedule(cfg).ota_count;
    let total_mw = ota_count as f64 * cal.p_ota_mw + cal.p_comparators_mw + cal.p_digital_clock_mw;
    Ok(PowerReport {
        ota_count,
        p_ota_mw: cal.p_ota_mw,
        p_comparators_mw: cal.p_comparators_mw,
        p_digital_clock_mw: cal.p_digital_clock_mw,
        total_mw,
        fom_pj_per_step: walden_fom(total_mw * 1e-3, enob, cfg.fs) * 1e12,
    })
}
