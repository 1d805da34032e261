//! Full-swing pulse test of amplifier setup (settling) along the chain.
//!
//! A pulse alternating between `-vref` and `+vref` every cycle is applied.
//! Each block has to slew its output from one rail to the other within its
//! half-period amplify window. A full-swing level maps onto itself through an
//! ideal 1.5-bit stage, so every block is asked to reproduce the level handed
//! over by the previous block; the report compares each block's settled
//! output after the rising transition with that level. Static gain and
//! offset errors are left out so the table shows settling alone.

use crate::error::Result;
use crate::model::{settle, AdcConfig, STAGE_COUNT};

pub const DEFAULT_SETUP_CYCLES: usize = 16;

pub const SETUP_ROW_NAMES: [&str; 2 + STAGE_COUNT] = [
    "Vin", "SHA", "Stage1", "Stage2", "Stage3", "Stage4", "Stage5", "Stage6",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SetupRow {
    pub block: &'static str,
    pub ideal_mv: f64,
    pub sim_mv: f64,
    pub error_pct: f64,
}

impl SetupRow {
    fn new(block: &'static str, ideal: f64, sim: f64) -> Self {
        let error_pct = if ideal == 0.0 {
            0.0
        } else {
            ((ideal - sim) / ideal).abs() * 100.0
        };
        Self {
            block,
            ideal_mv: ideal * 1e3,
            sim_mv: sim * 1e3,
            error_pct,
        }
    }
}

/// Rows Vin, SHA, Stage1..Stage6.
#[derive(Clone, Debug, PartialEq)]
pub struct SetupReport {
    pub rows: Vec<SetupRow>,
}

impl SetupReport {
    pub fn row(&self, block: &str) -> Option<&SetupRow> {
        self.rows.iter().find(|r| r.block == block)
    }
}

pub fn setup_test(cfg: &AdcConfig) -> Result<SetupReport> {
    setup_test_with_cycles(cfg, DEFAULT_SETUP_CYCLES)
}

/// Runs `cycles` pulse periods (low then high) and reports the last high
/// half. At least one period is always run.
pub fn setup_test_with_cycles(cfg: &AdcConfig, cycles: usize) -> Result<SetupReport> {
    cfg.validate()?;
    let t_half = cfg.settling_window();
    let mut held = 0.0;
    let mut outputs = [0.0; STAGE_COUNT];
    for _ in 0..cycles.max(1) {
        for vin in [-cfg.vref, cfg.vref] {
            held = settle(vin, held, cfg.sha.tau, t_half);
            let mut level = held;
            for (out, p) in outputs.iter_mut().zip(&cfg.stages) {
                *out = settle(level, *out, p.tau, t_half);
                level = *out;
            }
        }
    }

    let vin = cfg.vref;
    let mut rows = Vec::with_capacity(2 + STAGE_COUNT);
    rows.push(SetupRow::new(SETUP_ROW_NAMES[0], vin, vin));
    rows.push(SetupRow::new(SETUP_ROW_NAMES[1], vin, held));
    let mut previous = held;
    for (i, &out) in outputs.iter().enumerate() {
        rows.push(SetupRow::new(SETUP_ROW_NAMES[2 + i], previous, out));
        previous = out;
    }
    Ok(SetupReport { rows })
}
