//! Behavioral simulator of an 8-bit, OTA-sharing pipelined ADC (SHA, six
//! 1.5-bit stages, 2-bit flash backend) with the usual converter
//! characterization procedures and desk-scale models of the sigma-delta and
//! flash alternatives.
//!
//! ```
//! use pipeline_adc::{convert_waveform, gen_tone, spectrum, AdcConfig};
//!
//! let cfg = AdcConfig::ideal();
//! let tone = gen_tone(8192, cfg.fs, 10.417e6, cfg.vref, true).unwrap();
//! let codes = convert_waveform(&tone.samples, &cfg).unwrap();
//! let m = spectrum(&codes, 5).unwrap();
//! assert!((m.enob_bits - 8.0).abs() < 0.05);
//! ```

pub mod calibration;
pub mod characterize;
pub mod compare;
mod error;
pub mod model;
pub mod pipeline;

pub use characterize::{
    gen_ramp, gen_tone, inl_dnl, setup_test, spectrum, DynamicMetrics, SetupReport, StaticMetrics,
};
pub use compare::{
    compare_architectures, flash_montecarlo, power_model, sd_first_order, CompareSpec,
    FlashConfig, PowerCalibration, PowerReport, SdConfig,
};
pub use error::{AdcError, Result};
pub use model::{
    flash2b_quantize, mdac_residue, settle, sha_sample, stage_decide, AdcConfig, ClockPhase,
    StageParams,
};
pub use pipeline::{
    build_ota_schedule, convert_waveform, digital_error_correction, mux_pixels, CodeStream,
    ConversionTrace, Converter, OtaSchedule, RawStageCodes,
};
