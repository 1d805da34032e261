//! CSV renderings of the measurement results (header row, LF line endings).

use std::fmt::Write;

use super::{DynamicMetrics, SetupReport, SpectrumAnalysis, StaticMetrics};

fn round_to(v: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    let r = (v * scale).round() / scale;
    // avoid "-0"
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `stage,ideal_mv,sim_mv,error_pct` at display precision (0.1 mV, 0.01 %).
pub fn setup_csv(report: &SetupReport) -> String {
    let mut out = String::from("stage,ideal_mv,sim_mv,error_pct\n");
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.block,
            round_to(r.ideal_mv, 1),
            round_to(r.sim_mv, 1),
            round_to(r.error_pct, 2)
        )
        .unwrap();
    }
    out
}

/// `code,dnl_lsb,inl_lsb` for interior codes.
pub fn static_csv(m: &StaticMetrics) -> String {
    let mut out = String::from("code,dnl_lsb,inl_lsb\n");
    for ((code, dnl), inl) in m.codes().zip(&m.dnl).zip(&m.inl) {
        writeln!(out, "{code},{dnl},{inl}").unwrap();
    }
    out
}

/// `metric,value_lsb,code` rows for the DNL/INL peaks (magnitudes).
pub fn static_summary_csv(m: &StaticMetrics) -> String {
    format!(
        "metric,value_lsb,code\nmax_inl,{},{}\nmax_dnl,{},{}\n",
        m.max_inl.0.abs(),
        m.max_inl.1,
        m.max_dnl.0.abs(),
        m.max_dnl.1
    )
}

/// `bin,freq_hz,db` with levels relative to the fundamental.
pub fn spectrum_csv(a: &SpectrumAnalysis, fs: f64) -> String {
    let n = 2 * (a.power.len() - 1);
    let mut out = String::from("bin,freq_hz,db\n");
    for (k, db) in a.bins_dbc().iter().enumerate() {
        writeln!(out, "{k},{},{db}", fs * k as f64 / n as f64).unwrap();
    }
    out
}

pub fn dynamic_csv(m: &DynamicMetrics) -> String {
    format!(
        "sndr_db,sfdr_db,thd_db,enob\n{},{},{},{}\n",
        m.sndr_db, m.sfdr_db, m.thd_db, m.enob_bits
    )
}
