//! Stimulus generators for the static and dynamic tests.

use std::f64::consts::PI;

use crate::error::{AdcError, Result};

/// Linear ramp of `n` samples from `vmin` to `vmax`, both endpoints included.
pub fn gen_ramp(n: usize, vmin: f64, vmax: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(AdcError::InvalidArgument(format!("ramp needs at least 2 samples, got {n}")));
    }
    if !(vmin.is_finite() && vmax.is_finite() && vmax > vmin) {
        return Err(AdcError::InvalidArgument(format!(
            "ramp bounds must satisfy vmin < vmax (got {vmin}, {vmax})"
        )));
    }
    let step = (vmax - vmin) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| vmin + step * i as f64).collect();
    out[n - 1] = vmax;
    Ok(out)
}

/// A sampled sine record.
#[derive(Clone, Debug, PartialEq)]
pub struct Tone {
    pub samples: Vec<f64>,
    /// Frequency actually generated, Hz.
    pub fin: f64,
    /// Whole periods in the record when coherent.
    pub cycles: Option<u64>,
}

/// Nearest odd integer to `v`; ties resolve upward.
fn nearest_odd(v: f64) -> u64 {
    let below = (((v - 1.0) / 2.0).floor() * 2.0 + 1.0).max(1.0);
    let above = below + 2.0;
    if v - below < above - v {
        below as u64
    } else {
        above as u64
    }
}

/// Sine of amplitude `amplitude` volts sampled at `fs`.
///
/// With `coherent`, `n` must be a power of two and the frequency is moved to
/// `fs * M / n` with `M` the odd integer nearest `n * target_fin / fs`, so the
/// record holds an integer number of periods and every sample hits a distinct
/// phase.
pub fn gen_tone(n: usize, fs: f64, target_fin: f64, amplitude: f64, coherent: bool) -> Result<Tone> {
    if n == 0 {
        return Err(AdcError::EmptyInput);
    }
    if !(fs.is_finite() && fs > 0.0) {
        return Err(AdcError::InvalidArgument(format!("fs must be > 0, got {fs}")));
    }
    let nyquist = fs / 2.0;
    if !(target_fin > 0.0 && target_fin < nyquist) {
        return Err(AdcError::AboveNyquist {
            fin: target_fin,
            nyquist,
        });
    }
    let (fin, cycles) = if coherent {
        if !n.is_power_of_two() {
            return Err(AdcError::InvalidArgument(format!(
                "coherent tone needs a power-of-two length, got {n}"
            )));
        }
        let m = nearest_odd(n as f64 * target_fin / fs);
        if m as usize >= n / 2 {
            return Err(AdcError::AboveNyquist { fin: target_fin, nyquist });
        }
        (fs * m as f64 / n as f64, Some(m))
    } else {
        (target_fin, None)
    };
    let samples = match cycles {
        // exact phase from the integer index keeps the record periodic
        Some(m) => (0..n)
            .map(|k| amplitude * (2.0 * PI * ((k as u64 * m) % n as u64) as f64 / n as f64).sin())
            .collect(),
        None => (0..n)
            .map(|k| amplitude * (2.0 * PI * fin * k as f64 / fs).sin())
            .collect(),
    };
    Ok(Tone { samples, fin, cycles })
}
