//! Stimulus generation and the three measurement procedures: stage setup,
//! histogram INL/DNL and coherent-tone spectral metrics.

mod export;
mod linearity;
mod setup;
mod signal;
mod spectrum;

pub use export::{dynamic_csv, setup_csv, spectrum_csv, static_csv, static_summary_csv};
pub use linearity::{histogram, inl_dnl, static_from_histogram, StaticMetrics, MIN_MEAN_HITS};
pub use setup::{
    setup_test, setup_test_with_cycles, SetupReport, SetupRow, DEFAULT_SETUP_CYCLES,
    SETUP_ROW_NAMES,
};
pub use signal::{gen_ramp, gen_tone, Tone};
pub use spectrum::{
    analyze_spectrum, enob_from_sndr, harmonic_bin, power_spectrum, spectrum, DynamicMetrics,
    SpectrumAnalysis, DEFAULT_HARMONICS, MIN_RECORD,
};
