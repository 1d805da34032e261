//! Subcommands. Each one writes its CSV files into the output directory and
//! returns a one-line summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pipeline_adc::characterize::{
    analyze_spectrum, dynamic_csv, setup_csv, setup_test_with_cycles, spectrum_csv, static_csv,
    static_summary_csv,
};
use pipeline_adc::{
    compare_architectures, convert_waveform, gen_ramp, gen_tone, inl_dnl, power_model, AdcError,
    DynamicMetrics, PowerReport,
};

use crate::config::RunConfig;
use crate::CliError;

pub struct Output {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn round(v: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    let r = (v * s).round() / s;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn setup(cfg: &RunConfig, dir: &Path) -> Result<Output, CliError> {
    let report = setup_test_with_cycles(&cfg.converter(), cfg.setup_cycles)?;
    let last = report.rows.last().expect("setup report has rows");
    Ok(Output {
        files: vec![write(dir, "setup.csv", &setup_csv(&report))?],
        summary: format!("{}: {:.1} mV ({:.2}% error)", last.block, last.sim_mv, last.error_pct),
    })
}

pub fn ramp(cfg: &RunConfig, dir: &Path) -> Result<Output, CliError> {
    let (vmin, vmax) = cfg.ramp_bounds();
    let samples = gen_ramp(cfg.ramp.samples, vmin, vmax)?;
    let m = inl_dnl(&convert_waveform(&samples, &cfg.converter())?)?;
    Ok(Output {
        files: vec![
            write(dir, "static.csv", &static_csv(&m))?,
            write(dir, "static_summary.csv", &static_summary_csv(&m))?,
        ],
        summary: format!(
            "max |INL| {:.3} LSB at code {}, max |DNL| {:.3} LSB at code {}",
            m.max_inl.0.abs(),
            m.max_inl.1,
            m.max_dnl.0.abs(),
            m.max_dnl.1
        ),
    })
}

fn run_tone(cfg: &RunConfig) -> Result<pipeline_adc::characterize::SpectrumAnalysis, CliError> {
    let adc = cfg.converter();
    let tone = gen_tone(cfg.tone.samples, adc.fs, cfg.tone.fin, cfg.tone_amplitude(), true)?;
    let codes = convert_waveform(&tone.samples, &adc)?;
    Ok(analyze_spectrum(&codes.as_f64(), cfg.tone.harmonics)?)
}

fn dynamic_summary(m: &DynamicMetrics) -> String {
    format!(
        "SNDR {:.2} dB, SFDR {:.2} dB, THD {:.2} dB, ENOB {:.3}",
        m.sndr_db, m.sfdr_db, m.thd_db, m.enob_bits
    )
}

pub fn tone(cfg: &RunConfig, dir: &Path) -> Result<Output, CliError> {
    let a = run_tone(cfg)?;
    Ok(Output {
        files: vec![
            write(dir, "spectrum.csv", &spectrum_csv(&a, cfg.adc.fs))?,
            write(dir, "dynamic.csv", &dynamic_csv(&a.metrics))?,
        ],
        summary: dynamic_summary(&a.metrics),
    })
}

pub fn compare(cfg: &RunConfig, dir: &Path) -> Result<Output, CliError> {
    let table = compare_architectures(&cfg.compare_spec())?;
    Ok(Output {
        files: vec![
            write(dir, "compare.csv", &table.to_csv())?,
            write(dir, "compare.txt", &table.to_text())?,
        ],
        summary: format!("{} architectures compared", table.rows.len()),
    })
}

fn power_report(cfg: &RunConfig, enob: f64) -> Result<PowerReport, CliError> {
    Ok(power_model(&cfg.adc, &cfg.power, enob)?)
}

pub fn power_csv(r: &PowerReport) -> String {
    format!(
        "ota_count,p_ota_mw,p_comparators_mw,p_digital_clock_mw,total_mw,fom_pj\n{},{},{},{},{},{}\n",
        r.ota_count,
        round(r.p_ota_mw, 9),
        round(r.p_comparators_mw, 9),
        round(r.p_digital_clock_mw, 9),
        round(r.total_mw, 9),
        round(r.fom_pj_per_step, 9)
    )
}

pub fn power(cfg: &RunConfig, dir: &Path) -> Result<Output, CliError> {
    let r = power_report(cfg, cfg.power_enob)?;
    Ok(Output {
        files: vec![write(dir, "power.csv", &power_csv(&r))?],
        summary: format!(
            "{} OTAs, {:.2} mW, FOM {:.3} pJ/step",
            r.ota_count, r.total_mw, r.fom_pj_per_step
        ),
    })
}

/// Runs the tone test and the power model at every grid point. The figure
/// of merit of a sweep row uses the ENOB simulated at that point.
pub fn sweep(cfg: &RunConfig, dir: &Path) -> Result<Output, CliError> {
    let spec = match &cfg.sweep {
        Some(s) if !s.key.is_empty() && !s.values.is_empty() => s,
        Some(s) if s.key.is_empty() => return Err(CliError::Usage("sweep.key is not set".into())),
        _ => return Err(CliError::Usage("sweep grid is empty (set sweep.values)".into())),
    };
    let mut csv = format!("point,{},sndr_db,sfdr_db,enob,ota_count,total_mw,fom_pj\n", spec.key);
    for (i, value) in spec.values.iter().enumerate() {
        let mut point = cfg.clone();
        point.set(&spec.key, value)?;
        point.adc.validate().map_err(|e| CliError::Usage(format!("sweep point {i}: {e}")))?;
        let m = run_tone(&point)?.metrics;
        let p = power_report(&point, m.enob_bits)?;
        writeln!(
            csv,
            "{i},{value},{},{},{},{},{},{}",
            m.sndr_db,
            m.sfdr_db,
            m.enob_bits,
            p.ota_count,
            round(p.total_mw, 9),
            round(p.fom_pj_per_step, 9)
        )
        .unwrap();
    }
    Ok(Output {
        files: vec![write(dir, "sweep.csv", &csv)?],
        summary: format!("{} points over {}", spec.values.len(), spec.key),
    })
}

impl From<AdcError> for CliError {
    fn from(e: AdcError) -> Self {
        CliError::Runtime(e.to_string())
    }
}
