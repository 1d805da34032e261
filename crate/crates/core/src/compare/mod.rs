//! Behavioral models of the competing architectures and the power model.

mod flash;
mod power;
mod sigma_delta;
mod table;

pub use flash::{flash_montecarlo, ladder_max_inl, FlashConfig, FlashSummary};
pub use power::{
    power_model, walden_fom, PowerCalibration, PowerReport, COMPARATOR_POWER_SHARE,
    DIGITAL_POWER_SHARE, OTA_POWER_SHARE, REFERENCE_ENOB, REFERENCE_TOTAL_MW,
};
pub use sigma_delta::{sd_first_order, sd_modulate, SdConfig, SdResult};
pub use table::{compare_architectures, ArchRow, CompareSpec, ComparisonTable, MAX_SD_OSR};
