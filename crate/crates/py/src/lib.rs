//! Python bindings: converter configuration, conversion, and the
//! characterization and comparison procedures.

use ::pipeline_adc as sim;
use ::pipeline_adc::characterize::{setup_test_with_cycles, DEFAULT_HARMONICS, DEFAULT_SETUP_CYCLES};
use ::pipeline_adc::compare::REFERENCE_ENOB;
use ::pipeline_adc::model::STAGE_COUNT;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

fn err(e: sim::AdcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converter description. Build one with `AdcConfig.ideal()` or
/// `AdcConfig.paper_point()` and adjust fields in place.
#[pyclass(name = "AdcConfig", from_py_object)]
#[derive(Clone)]
struct PyAdcConfig {
    inner: sim::AdcConfig,
}

#[pymethods]
impl PyAdcConfig {
    #[new]
    fn new() -> Self {
        Self::ideal()
    }

    #[staticmethod]
    fn ideal() -> Self {
        Self {
            inner: sim::AdcConfig::ideal(),
        }
    }

    #[staticmethod]
    fn paper_point() -> Self {
        Self {
            inner: sim::AdcConfig::paper_point(),
        }
    }

    #[staticmethod]
    fn setup_calibrated() -> Self {
        Self {
            inner: sim::AdcConfig::setup_calibrated(),
        }
    }

    fn without_impairments(&self) -> Self {
        Self {
            inner: self.inner.without_impairments(),
        }
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(err)
    }

    #[getter]
    fn vref(&self) -> f64 {
        self.inner.vref
    }
    #[setter]
    fn set_vref(&mut self, v: f64) {
        self.inner.vref = v;
    }
    #[getter]
    fn fs(&self) -> f64 {
        self.inner.fs
    }
    #[setter]
    fn set_fs(&mut self, v: f64) {
        self.inner.fs = v;
    }
    #[getter]
    fn ota_sharing(&self) -> bool {
        self.inner.ota_sharing
    }
    #[setter]
    fn set_ota_sharing(&mut self, v: bool) {
        self.inner.ota_sharing = v;
    }
    #[getter]
    fn noise_sigma(&self) -> f64 {
        self.inner.noise_sigma
    }
    #[setter]
    fn set_noise_sigma(&mut self, v: f64) {
        self.inner.noise_sigma = v;
    }
    #[getter]
    fn noise_seed(&self) -> u64 {
        self.inner.noise_seed
    }
    #[setter]
    fn set_noise_seed(&mut self, v: u64) {
        self.inner.noise_seed = v;
    }
    #[getter]
    fn sharing_memory(&self) -> f64 {
        self.inner.sharing_memory
    }
    #[setter]
    fn set_sharing_memory(&mut self, v: f64) {
        self.inner.sharing_memory = v;
    }
    #[getter]
    fn sha_aperture_skew(&self) -> f64 {
        self.inner.sha_aperture_skew
    }
    #[setter]
    fn set_sha_aperture_skew(&mut self, v: f64) {
        self.inner.sha_aperture_skew = v;
    }

    /// SHA parameters as `(gain_error, offset, tau)`.
    #[getter]
    fn sha(&self) -> (f64, f64, f64) {
        let s = &self.inner.sha;
        (s.gain_error, s.offset, s.tau)
    }

    #[pyo3(signature = (gain_error=None, offset=None, tau=None))]
    fn set_sha(&mut self, gain_error: Option<f64>, offset: Option<f64>, tau: Option<f64>) {
        let s = &mut self.inner.sha;
        s.gain_error = gain_error.unwrap_or(s.gain_error);
        s.offset = offset.unwrap_or(s.offset);
        s.tau = tau.unwrap_or(s.tau);
    }

    /// Stage `index` (1-based) as
    /// `(gain_error, offset, tau, cmp_shift_lo, cmp_shift_hi)`.
    fn stage(&self, index: usize) -> PyResult<(f64, f64, f64, f64, f64)> {
        let s = &self.inner.stages[stage_slot(index)?];
        Ok((s.gain_error, s.offset, s.tau, s.cmp_threshold_shift[0], s.cmp_threshold_shift[1]))
    }

    #[pyo3(signature = (index, gain_error=None, offset=None, tau=None, cmp_shift_lo=None, cmp_shift_hi=None))]
    fn set_stage(
        &mut self,
        index: usize,
        gain_error: Option<f64>,
        offset: Option<f64>,
        tau: Option<f64>,
        cmp_shift_lo: Option<f64>,
        cmp_shift_hi: Option<f64>,
    ) -> PyResult<()> {
        let s = &mut self.inner.stages[stage_slot(index)?];
        s.gain_error = gain_error.unwrap_or(s.gain_error);
        s.offset = offset.unwrap_or(s.offset);
        s.tau = tau.unwrap_or(s.tau);
        s.cmp_threshold_shift[0] = cmp_shift_lo.unwrap_or(s.cmp_threshold_shift[0]);
        s.cmp_threshold_shift[1] = cmp_shift_hi.unwrap_or(s.cmp_threshold_shift[1]);
        Ok(())
    }

    fn ota_count(&self) -> usize {
        sim::build_ota_schedule(&self.inner).ota_count
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

fn stage_slot(index: usize) -> PyResult<usize> {
    if (1..=STAGE_COUNT).contains(&index) {
        Ok(index - 1)
    } else {
        Err(PyIndexError::new_err(format!("stage index must be 1..={STAGE_COUNT}, got {index}")))
    }
}

#[pyclass(name = "StaticMetrics", frozen, get_all)]
struct PyStaticMetrics {
    dnl: Vec<f64>,
    inl: Vec<f64>,
    max_dnl: f64,
    max_dnl_code: u8,
    max_inl: f64,
    max_inl_code: u8,
    histogram: Vec<u64>,
}

#[pyclass(name = "DynamicMetrics", frozen, get_all)]
struct PyDynamicMetrics {
    sndr_db: f64,
    sfdr_db: f64,
    thd_db: f64,
    enob_bits: f64,
    fundamental_bin: usize,
    worst_spur_bin: usize,
}

#[pyclass(name = "PowerReport", frozen, get_all)]
struct PyPowerReport {
    ota_count: usize,
    p_ota_mw: f64,
    p_comparators_mw: f64,
    p_digital_clock_mw: f64,
    total_mw: f64,
    fom_pj_per_step: f64,
}

fn stream(codes: Vec<u8>, fs: f64) -> sim::CodeStream {
    sim::CodeStream { codes, fs }
}

/// Converts a waveform (volts) to 8-bit codes.
#[pyfunction]
fn convert(samples: Vec<f64>, cfg: &PyAdcConfig) -> PyResult<Vec<u8>> {
    Ok(sim::convert_waveform(&samples, &cfg.inner).map_err(err)?.codes)
}

#[pyfunction]
fn gen_ramp(n: usize, vmin: f64, vmax: f64) -> PyResult<Vec<f64>> {
    sim::gen_ramp(n, vmin, vmax).map_err(err)
}

/// Returns `(samples, fin)`; with `coherent` the frequency is moved onto an
/// odd bin.
#[pyfunction]
#[pyo3(signature = (n, fs, fin, amplitude, coherent=true))]
fn gen_tone(n: usize, fs: f64, fin: f64, amplitude: f64, coherent: bool) -> PyResult<(Vec<f64>, f64)> {
    let t = sim::gen_tone(n, fs, fin, amplitude, coherent).map_err(err)?;
    Ok((t.samples, t.fin))
}

#[pyfunction]
fn inl_dnl(codes: Vec<u8>) -> PyResult<PyStaticMetrics> {
    let m = sim::inl_dnl(&stream(codes, 1.0)).map_err(err)?;
    Ok(PyStaticMetrics {
        max_dnl: m.max_dnl.0,
        max_dnl_code: m.max_dnl.1,
        max_inl: m.max_inl.0,
        max_inl_code: m.max_inl.1,
        dnl: m.dnl,
        inl: m.inl,
        histogram: m.histogram,
    })
}

#[pyfunction]
#[pyo3(signature = (codes, n_harmonics=DEFAULT_HARMONICS))]
fn spectrum(codes: Vec<u8>, n_harmonics: usize) -> PyResult<PyDynamicMetrics> {
    let m = sim::spectrum(&stream(codes, 1.0), n_harmonics).map_err(err)?;
    Ok(PyDynamicMetrics {
        sndr_db: m.sndr_db,
        sfdr_db: m.sfdr_db,
        thd_db: m.thd_db,
        enob_bits: m.enob_bits,
        fundamental_bin: m.fundamental_bin,
        worst_spur_bin: m.worst_spur_bin,
    })
}

/// Rows `(block, ideal_mv, sim_mv, error_pct)` of the full-swing pulse test.
#[pyfunction]
#[pyo3(signature = (cfg, cycles=DEFAULT_SETUP_CYCLES))]
fn setup_test(cfg: &PyAdcConfig, cycles: usize) -> PyResult<Vec<(String, f64, f64, f64)>> {
    let r = setup_test_with_cycles(&cfg.inner, cycles).map_err(err)?;
    Ok(r.rows
        .into_iter()
        .map(|row| (row.block.to_string(), row.ideal_mv, row.sim_mv, row.error_pct))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (cfg, enob=REFERENCE_ENOB))]
fn power_model(cfg: &PyAdcConfig, enob: f64) -> PyResult<PyPowerReport> {
    let r = sim::power_model(&cfg.inner, &sim::PowerCalibration::default(), enob).map_err(err)?;
    Ok(PyPowerReport {
        ota_count: r.ota_count,
        p_ota_mw: r.p_ota_mw,
        p_comparators_mw: r.p_comparators_mw,
        p_digital_clock_mw: r.p_digital_clock_mw,
        total_mw: r.total_mw,
        fom_pj_per_step: r.fom_pj_per_step,
    })
}

/// In-band SNR (dB) of a first-order single-bit modulator.
#[pyfunction]
#[pyo3(signature = (osr, n_samples=65536, amplitude=0.5, fin_normalized=0.0005))]
fn sd_first_order(osr: usize, n_samples: usize, amplitude: f64, fin_normalized: f64) -> PyResult<f64> {
    let cfg = sim::SdConfig {
        osr,
        n_samples,
        input_amplitude: amplitude,
    };
    Ok(sim::sd_first_order(&cfg, fin_normalized).map_err(err)?.snr_db)
}

/// `(mean, worst)` max|INL| in LSB over the Monte Carlo trials.
#[pyfunction]
#[pyo3(signature = (n_bits=8, ladder_sigma=0.01, n_trials=1000, seed=0))]
fn flash_montecarlo(n_bits: u32, ladder_sigma: f64, n_trials: usize, seed: u64) -> PyResult<(f64, f64)> {
    let s = sim::flash_montecarlo(&sim::FlashConfig {
        n_bits,
        ladder_sigma,
        n_trials,
        rng_seed: seed,
    })
    .map_err(err)?;
    Ok((s.mean_max_inl, s.max_max_inl))
}

/// Architecture comparison as CSV text.
#[pyfunction]
#[pyo3(signature = (cfg=None, seed=0))]
fn compare_architectures(cfg: Option<&PyAdcConfig>, seed: u64) -> PyResult<String> {
    let spec = sim::CompareSpec {
        seed,
        pipeline: cfg.map(|c| c.inner.clone()).unwrap_or_default(),
        ..sim::CompareSpec::default()
    };
    Ok(sim::compare_architectures(&spec).map_err(err)?.to_csv())
}

#[pymodule]
fn pipeline_adc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAdcConfig>()?;
    m.add_class::<PyStaticMetrics>()?;
    m.add_class::<PyDynamicMetrics>()?;
    m.add_class::<PyPowerReport>()?;
    m.add_function(wrap_pyfunction!(convert, m)?)?;
    m.add_function(wrap_pyfunction!(gen_ramp, m)?)?;
    m.add_function(wrap_pyfunction!(gen_tone, m)?)?;
    m.add_function(wrap_pyfunction!(inl_dnl, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(setup_test, m)?)?;
    m.add_function(wrap_pyfunction!(power_model, m)?)?;
    m.add_function(wrap_pyfunction!(sd_first_order, m)?)?;
    m.add_function(wrap_pyfunction!(flash_montecarlo, m)?)?;
    m.add_function(wrap_pyfunction!(compare_architectures, m)?)?;
    Ok(())
}
