//! Monte Carlo of a resistor-ladder flash converter with mismatched resistors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{AdcError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlashConfig {
    /// Resolution, 1..=8 bits.
    pub n_bits: u32,
    /// Relative standard deviation of each ladder resistor.
    pub ladder_sigma: f64,
    pub n_trials: usize,
    pub rng_seed: u64,
}

impl Default for FlashConfig {
    fn default() -> Self {
        Self {
            n_bits: 8,
            ladder_sigma: 0.01,
            n_trials: 1000,
            rng_seed: 0,
        }
    }
}

impl FlashConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.n_bits) {
            return Err(AdcError::InvalidArgument(format!("n_bits must be 1..=8, got {}", self.n_bits)));
        }
        if !(self.ladder_sigma.is_finite() && self.ladder_sigma >= 0.0) {
            return Err(AdcError::InvalidArgument("ladder_sigma must be >= 0".into()));
        }
        if self.n_trials == 0 {
            return Err(AdcError::InvalidArgument("n_trials must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlashSummary {
    pub mean_max_inl: f64,
    pub max_max_inl: f64,
    /// max|INL| of every trial, in trial order.
    pub trials: Vec<f64>,
}

/// Worst threshold deviation of a ladder in LSB. Thresholds sit at the
/// cumulative resistor sums normalized to the total.
pub fn ladder_max_inl(resistors: &[f64]) -> f64 {
    let n = resistors.len() as f64;
    let total: f64 = resistors.iter().sum();
    let mut acc = 0.0;
    let mut worst = 0.0f64;
    for (k, r) in resistors[..resistors.len() - 1].iter().enumerate() {
        acc += r;
        worst = worst.max((acc / total * n - (k + 1) as f64).abs());
    }
    worst
}

fn trial(cfg: &FlashConfig, index: usize, noise: &Normal<f64>) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(index as u64);
    let resistors: Vec<f64> = (0..1usize << cfg.n_bits)
        .map(|_| 1.0 + noise.sample(&mut rng))
        .collect();
    ladder_max_inl(&resistors)
}

/// Per-trial seeds derive from `(rng_seed, trial index)`, so trials can run
/// in parallel and the summary is reproducible.
pub fn flash_montecarlo(cfg: &FlashConfig) -> Result<FlashSummary> {
    cfg.validate()?;
    let noise = Normal::new(0.0, cfg.ladder_sigma).map_err(|e| AdcError::InvalidArgument(e.to_string()))?;
    let trials: Vec<f64> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| trial(cfg, i, &noise))
        .collect();
    let mean_max_inl = trials.iter().sum::<f64>() / trials.len() as f64;
    let max_max_inl = trials.iter().copied().fold(0.0, f64::max);
    Ok(FlashSummary {
        mean_max_inl,
        max_max_inl,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matched_ladder_is_exact() {
        let s = flash_montecarlo(&FlashConfig {
            ladder_sigma: 0.0,
            n_trials: 20,
            ..FlashConfig::default()
        })
        .unwrap();
        assert!(s.trials.iter().all(|&v| v == 0.0));
        let one_bit = FlashConfig {
            n_bits: 1,
            ladder_sigma: 0.0,
            n_trials: 1,
            rng_seed: 3,
        };
        assert_eq!(flash_montecarlo(&one_bit).unwrap().mean_max_inl, 0.0);
    }

    #[test]
    fn single_perturbed_resistor() {
        // one resistor 4% long in a 4-resistor ladder:
        // thresholds 1.04/4.04, 2.04/4.04, 3.04/4.04 of full scale
        let inl = ladder_max_inl(&[1.04, 1.0, 1.0, 1.0]);
        let expected = (1.04 / 4.04 * 4.0 - 1.0f64)
            .abs()
            .max((2.04 / 4.04 * 4.0 - 2.0f64).abs())
            .max((3.04 / 4.04 * 4.0 - 3.0f64).abs());
        assert!((inl - expected).abs() < 1e-15);
    }

    #[test]
    fn reruns_are_bit_identical() {
        let cfg = FlashConfig {
            n_trials: 1,
            rng_seed: 42,
            ..FlashConfig::default()
        };
        assert_eq!(flash_montecarlo(&cfg).unwrap(), flash_montecarlo(&cfg).unwrap());
        let many = FlashConfig { n_trials: 64, ..cfg };
        assert_eq!(flash_montecarlo(&many).unwrap(), flash_montecarlo(&many).unwrap());
    }

    #[test]
    fn validation() {
        assert!(FlashConfig { n_bits: 9, ..FlashConfig::default() }.validate().is_err());
        assert!(FlashConfig { n_trials: 0, ..FlashConfig::default() }.validate().is_err());
        assert!(FlashConfig { ladder_sigma: -0.1, ..FlashConfig::default() }.validate().is_err());
    }
}
