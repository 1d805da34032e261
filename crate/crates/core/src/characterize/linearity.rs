//! Code-density (histogram) linearity test.

use crate::error::{AdcError, Result};
use crate::pipeline::CodeStream;

/// Fewest mean hits per interior code accepted by [`inl_dnl`].
pub const MIN_MEAN_HITS: usize = 64;

const FIRST_CODE: usize = 1;
const LAST_CODE: usize = 254;

/// Per-code DNL and INL in LSB over interior codes `1..=254`.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticMetrics {
    /// `dnl[k - 1]` belongs to code `k`.
    pub dnl: Vec<f64>,
    /// Endpoint-corrected INL, same indexing as `dnl`.
    pub inl: Vec<f64>,
    /// Largest-magnitude DNL (signed) and its code.
    pub max_dnl: (f64, u8),
    /// Largest-magnitude INL (signed) and its code.
    pub max_inl: (f64, u8),
    /// Raw hit counts for all 256 codes.
    pub histogram: Vec<u64>,
}

impl StaticMetrics {
    pub fn codes(&self) -> impl Iterator<Item = u8> + '_ {
        (FIRST_CODE..=LAST_CODE).map(|c| c as u8)
    }
}

pub fn histogram(codes: &CodeStream) -> Vec<u64> {
    let mut h = vec![0u64; 1 << codes.n_bits()];
    for &c in &codes.codes {
        h[usize::from(c)] += 1;
    }
    h
}

fn peak(values: &[f64]) -> (f64, u8) {
    let (i, v) = values
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, &v)| if v.abs() > best.1.abs() { (i, v) } else { best });
    (v, (i + FIRST_CODE) as u8)
}

/// DNL/INL from the output of a full-scale slow ramp.
///
/// End codes 0 and 255 collect the saturated samples and are excluded. A
/// missing interior code shows up as DNL = -1; a record with fewer than
/// [`MIN_MEAN_HITS`] mean hits per interior code is rejected.
pub fn inl_dnl(codes: &CodeStream) -> Result<StaticMetrics> {
    static_from_histogram(&histogram(codes))
}

pub fn static_from_histogram(hist: &[u64]) -> Result<StaticMetrics> {
    if hist.len() != 256 {
        return Err(AdcError::InvalidArgument(format!(
            "histogram must have 256 bins, got {}",
            hist.len()
        )));
    }
    let interior = &hist[FIRST_CODE..=LAST_CODE];
    let mean = interior.iter().sum::<u64>() as f64 / interior.len() as f64;
    if mean < MIN_MEAN_HITS as f64 {
        return Err(AdcError::InsufficientCoverage {
            mean_hits: mean,
            required: MIN_MEAN_HITS,
        });
    }
    let dnl: Vec<f64> = interior.iter().map(|&h| h as f64 / mean - 1.0).collect();
    let raw: Vec<f64> = dnl
        .iter()
        .scan(0.0, |acc, &d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    let first = raw[0];
    let slope = (raw[raw.len() - 1] - first) / (raw.len() - 1) as f64;
    let inl: Vec<f64> = raw
        .iter()
        .enumerate()
        .map(|(i, &v)| v - (first + slope * i as f64))
        .collect();
    Ok(StaticMetrics {
        max_dnl: peak(&dnl),
        max_inl: peak(&inl),
        dnl,
        inl,
        histogram: hist.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(hist: &[u64]) -> CodeStream {
        let codes = hist
            .iter()
            .enumerate()
            .flat_map(|(c, &n)| std::iter::repeat_n(c as u8, n as usize))
            .collect();
        CodeStream { codes, fs: 1.0 }
    }

    #[test]
    fn flat_histogram_is_perfect() {
        let m = inl_dnl(&stream(&[100; 256])).unwrap();
        assert_eq!(m.dnl.len(), 254);
        assert!(m.dnl.iter().all(|&d| d == 0.0));
        assert!(m.inl.iter().all(|&d| d.abs() < 1e-12));
    }

    #[test]
    fn missing_code_reports_minus_one() {
        let mut h = vec![128u64; 256];
        h[96] = 0;
        h[97] = 256;
        let m = inl_dnl(&stream(&h)).unwrap();
        assert_eq!(m.dnl[95], -1.0);
        assert_eq!(m.max_dnl.1, 96);
        assert_eq!(m.max_dnl.0, -1.0);
        assert!((m.dnl[96] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_sparse_record() {
        let err = inl_dnl(&stream(&[10; 256])).unwrap_err();
        assert!(matches!(err, AdcError::InsufficientCoverage { .. }));
    }

    #[test]
    fn dnl_sums_to_zero_and_inl_is_corrected_cumsum() {
        let h: Vec<u64> = (0..256u64).map(|c| 100 + (c * 37 % 23)).collect();
        let m = inl_dnl(&stream(&h)).unwrap();
        assert!(m.dnl.iter().sum::<f64>().abs() < 1e-9);
        assert!(m.dnl.iter().all(|&d| d >= -1.0));
        // endpoints pinned
        assert!(m.inl[0].abs() < 1e-12 && m.inl[253].abs() < 1e-12);
        let slope = (m.inl[1] - m.inl[0]) - m.dnl[1];
        for k in 1..254 {
            assert!((m.inl[k] - m.inl[k - 1] - m.dnl[k] - slope).abs() < 1e-9);
        }
    }
}
