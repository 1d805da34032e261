//! Run configuration: a TOML document read as flat dotted keys
//! (`adc.vref`, `stages.3.tau`, ...) plus `key=value` overrides.

use std::collections::BTreeMap;
use std::path::Path;

use pipeline_adc::compare::REFERENCE_ENOB;
use pipeline_adc::model::STAGE_COUNT;
use pipeline_adc::{AdcConfig, CompareSpec, PowerCalibration};
use toml::Value;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: expected {expected}, got {got}")]
    Type {
        key: String,
        expected: &'static str,
        got: String,
    },
    #[error("key `{key}`: {msg}")]
    Invalid { key: String, msg: String },
    #[error("override `{0}` is not of the form key=value")]
    Override(String),
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Clone, Debug, PartialEq)]
pub struct RampParams {
    pub samples: usize,
    /// Defaults to `-vref`.
    pub vmin: Option<f64>,
    /// Defaults to `+vref`.
    pub vmax: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToneParams {
    pub samples: usize,
    pub fin: f64,
    /// Defaults to `vref` (full scale).
    pub amplitude: Option<f64>,
    pub harmonics: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareParams {
    pub n_bits: u32,
    pub flash_sigma: f64,
    pub flash_trials: usize,
    pub sd_amplitude: f64,
    pub sd_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    pub values: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub adc: AdcConfig,
    pub seed: u64,
    pub ramp: RampParams,
    pub tone: ToneParams,
    pub setup_cycles: usize,
    pub power: PowerCalibration,
    /// ENOB used for the figure of merit of the power report.
    pub power_enob: f64,
    pub compare: CompareParams,
    pub sweep: Option<SweepSpec>,
}

impl Default for RunConfig {
    /// Design point of the reference converter: 8 bit, 166.6 MS/s, 0.6 V
    /// reference, OTA sharing on, impairments of the reference operating point.
    fn default() -> Self {
        let cmp = CompareSpec::default();
        Self {
            adc: AdcConfig::paper_point(),
            seed: 0,
            ramp: RampParams {
                samples: 1 << 15,
                vmin: None,
                vmax: None,
            },
            tone: ToneParams {
                samples: 8192,
                fin: 10.417e6,
                amplitude: None,
                harmonics: pipeline_adc::characterize::DEFAULT_HARMONICS,
            },
            setup_cycles: pipeline_adc::characterize::DEFAULT_SETUP_CYCLES,
            power: PowerCalibration::default(),
            power_enob: REFERENCE_ENOB,
            compare: CompareParams {
                n_bits: cmp.n_bits,
                flash_sigma: cmp.flash_sigma,
                flash_trials: cmp.flash_trials,
                sd_amplitude: cmp.sd_amplitude,
                sd_samples: cmp.sd_samples,
            },
            sweep: None,
        }
    }
}

/// Flattens nested tables into dotted keys. Arrays stay values.
pub fn flatten(table: &toml::Table) -> BTreeMap<String, Value> {
    fn walk(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
        for (k, v) in table {
            let key = if prefix.is_empty() {
                k.clone()
            } else {
                format!("{prefix}.{k}")
            };
            match v {
                Value::Table(t) => walk(&key, t, out),
                other => {
                    out.insert(key, other.clone());
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    walk("", table, &mut out);
    out
}

pub fn parse_document(text: &str) -> Result<BTreeMap<String, Value>> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    Ok(flatten(&table))
}

pub fn read_file(path: &Path) -> Result<BTreeMap<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_document(&text)
}

/// `key=value`; the value is read as a TOML value, falling back to a bare
/// string.
pub fn parse_override(arg: &str) -> Result<(String, Value)> {
    let (key, raw) = arg.split_once('=').ok_or_else(|| ConfigError::Override(arg.into()))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Override(arg.into()));
    }
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

fn type_name(v: &Value) -> String {
    match v {
        Value::String(s) => format!("string {s:?}"),
        Value::Integer(i) => format!("integer {i}"),
        Value::Float(f) => format!("float {f}"),
        Value::Boolean(b) => format!("boolean {b}"),
        Value::Datetime(d) => format!("datetime {d}"),
        Value::Array(_) => "array".into(),
        Value::Table(_) => "table".into(),
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    let x = match v {
        Value::Float(f) => *f,
        Value::Integer(i) => *i as f64,
        _ => {
            return Err(ConfigError::Type {
                key: key.into(),
                expected: "a number",
                got: type_name(v),
            })
        }
    };
    if !x.is_finite() {
        return Err(ConfigError::Invalid {
            key: key.into(),
            msg: "must be finite".into(),
        });
    }
    Ok(x)
}

fn as_u64(key: &str, v: &Value) -> Result<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(ConfigError::Type {
            key: key.into(),
            expected: "a non-negative integer",
            got: type_name(v),
        }),
    }
}

fn as_usize(key: &str, v: &Value) -> Result<usize> {
    as_u64(key, v).map(|n| n as usize)
}

fn as_bool(key: &str, v: &Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| ConfigError::Type {
        key: key.into(),
        expected: "a boolean",
        got: type_name(v),
    })
}

fn as_str(key: &str, v: &Value) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| ConfigError::Type {
        key: key.into(),
        expected: "a string",
        got: type_name(v),
    })
}

fn index_in(key: &str, raw: &str, max: usize) -> Result<usize> {
    match raw.parse::<usize>() {
        Ok(i) if (1..=max).contains(&i) => Ok(i - 1),
        _ => Err(ConfigError::UnknownKey(key.into())),
    }
}

impl RunConfig {
    /// Applies one dotted key.
    pub fn set(&mut self, key: &str, v: &Value) -> Result<()> {
        let parts: Vec<&str> = key.split('.').collect();
        match parts.as_slice() {
            ["seed"] => self.seed = as_u64(key, v)?,
            ["adc", "vref"] => self.adc.vref = as_f64(key, v)?,
            ["adc", "fs"] => self.adc.fs = as_f64(key, v)?,
            ["adc", "ota_sharing"] => self.adc.ota_sharing = as_bool(key, v)?,
            ["adc", "noise_sigma"] => self.adc.noise_sigma = as_f64(key, v)?,
            ["adc", "sharing_memory"] => self.adc.sharing_memory = as_f64(key, v)?,
            ["sha", "gain_error"] => self.adc.sha.gain_error = as_f64(key, v)?,
            ["sha", "offset"] => self.adc.sha.offset = as_f64(key, v)?,
            ["sha", "tau"] => self.adc.sha.tau = as_f64(key, v)?,
            ["sha", "aperture_skew"] => self.adc.sha_aperture_skew = as_f64(key, v)?,
            ["stages", n, field] => {
                let stage = &mut self.adc.stages[index_in(key, n, STAGE_COUNT)?];
                let x = match *field {
                    "gain_error" | "offset" | "tau" | "cmp_shift_lo" | "cmp_shift_hi" => as_f64(key, v)?,
                    _ => return Err(ConfigError::UnknownKey(key.into())),
                };
                match *field {
                    "gain_error" => stage.gain_error = x,
                    "offset" => stage.offset = x,
                    "tau" => stage.tau = x,
                    "cmp_shift_lo" => stage.cmp_threshold_shift[0] = x,
                    _ => stage.cmp_threshold_shift[1] = x,
                }
            }
            ["flash", "threshold_shift", n] => {
                let i = index_in(key, n, 3)?;
                self.adc.flash_threshold_shifts[i] = as_f64(key, v)?;
            }
            ["ramp", "samples"] => self.ramp.samples = as_usize(key, v)?,
            ["ramp", "vmin"] => self.ramp.vmin = Some(as_f64(key, v)?),
            ["ramp", "vmax"] => self.ramp.vmax = Some(as_f64(key, v)?),
            ["tone", "samples"] => self.tone.samples = as_usize(key, v)?,
            ["tone", "fin"] => self.tone.fin = as_f64(key, v)?,
            ["tone", "amplitude"] => self.tone.amplitude = Some(as_f64(key, v)?),
            ["tone", "harmonics"] => self.tone.harmonics = as_usize(key, v)?,
            ["setup", "cycles"] => self.setup_cycles = as_usize(key, v)?,
            ["power", "p_ota"] => self.power.p_ota_mw = as_f64(key, v)?,
            ["power", "p_comparators"] => self.power.p_comparators_mw = as_f64(key, v)?,
            ["power", "p_digital_clock"] => self.power.p_digital_clock_mw = as_f64(key, v)?,
            ["power", "enob"] => self.power_enob = as_f64(key, v)?,
            ["compare", "n_bits"] => {
                let n = as_u64(key, v)?;
                self.compare.n_bits = u32::try_from(n).map_err(|_| ConfigError::Invalid {
                    key: key.into(),
                    msg: format!("{n} is out of range"),
                })?;
            }
            ["compare", "flash_sigma"] => self.compare.flash_sigma = as_f64(key, v)?,
            ["compare", "flash_trials"] => self.compare.flash_trials = as_usize(key, v)?,
            ["compare", "sd_amplitude"] => self.compare.sd_amplitude = as_f64(key, v)?,
            ["compare", "sd_samples"] => self.compare.sd_samples = as_usize(key, v)?,
            ["sweep", "key"] => {
                let target = as_str(key, v)?;
                if target.starts_with("sweep.") {
                    return Err(ConfigError::Invalid {
                        key: key.into(),
                        msg: "cannot sweep a sweep key".into(),
                    });
                }
                // reject unknown targets early
                self.clone().set(&target, &self.current(&target)?)?;
                self.sweep_mut().key = target;
            }
            ["sweep", "values"] => match v {
                Value::Array(a) => self.sweep_mut().values = a.clone(),
                _ => {
                    return Err(ConfigError::Type {
                        key: key.into(),
                        expected: "an array",
                        got: type_name(v),
                    })
                }
            },
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn sweep_mut(&mut self) -> &mut SweepSpec {
        self.sweep.get_or_insert_with(|| SweepSpec {
            key: String::new(),
            values: Vec::new(),
        })
    }

    /// Current value of a sweepable key, in the form [`RunConfig::set`] accepts.
    pub fn current(&self, key: &str) -> Result<Value> {
        let f = Value::Float;
        let u = |n: usize| Value::Integer(n as i64);
        let parts: Vec<&str> = key.split('.').collect();
        let a = &self.adc;
        Ok(match parts.as_slice() {
            ["seed"] => Value::Integer(self.seed as i64),
            ["adc", "vref"] => f(a.vref),
            ["adc", "fs"] => f(a.fs),
            ["adc", "ota_sharing"] => Value::Boolean(a.ota_sharing),
            ["adc", "noise_sigma"] => f(a.noise_sigma),
            ["adc", "sharing_memory"] => f(a.sharing_memory),
            ["sha", "gain_error"] => f(a.sha.gain_error),
            ["sha", "offset"] => f(a.sha.offset),
            ["sha", "tau"] => f(a.sha.tau),
            ["sha", "aperture_skew"] => f(a.sha_aperture_skew),
            ["stages", n, field] => {
                let s = &a.stages[index_in(key, n, STAGE_COUNT)?];
                match *field {
                    "gain_error" => f(s.gain_error),
                    "offset" => f(s.offset),
                    "tau" => f(s.tau),
                    "cmp_shift_lo" => f(s.cmp_threshold_shift[0]),
                    "cmp_shift_hi" => f(s.cmp_threshold_shift[1]),
                    _ => return Err(ConfigError::UnknownKey(key.into())),
                }
            }
            ["flash", "threshold_shift", n] => f(a.flash_threshold_shifts[index_in(key, n, 3)?]),
            ["ramp", "samples"] => u(self.ramp.samples),
            ["ramp", "vmin"] => f(self.ramp.vmin.unwrap_or(-a.vref)),
            ["ramp", "vmax"] => f(self.ramp.vmax.unwrap_or(a.vref)),
            ["tone", "samples"] => u(self.tone.samples),
            ["tone", "fin"] => f(self.tone.fin),
            ["tone", "amplitude"] => f(self.tone.amplitude.unwrap_or(a.vref)),
            ["tone", "harmonics"] => u(self.tone.harmonics),
            ["setup", "cycles"] => u(self.setup_cycles),
            ["power", "p_ota"] => f(self.power.p_ota_mw),
            ["power", "p_comparators"] => f(self.power.p_comparators_mw),
            ["power", "p_digital_clock"] => f(self.power.p_digital_clock_mw),
            ["power", "enob"] => f(self.power_enob),
            ["compare", "n_bits"] => Value::Integer(i64::from(self.compare.n_bits)),
            ["compare", "flash_sigma"] => f(self.compare.flash_sigma),
            ["compare", "flash_trials"] => u(self.compare.flash_trials),
            ["compare", "sd_amplitude"] => f(self.compare.sd_amplitude),
            ["compare", "sd_samples"] => u(self.compare.sd_samples),
            _ => return Err(ConfigError::UnknownKey(key.into())),
        })
    }

    /// Applies every key of a flattened document in key order.
    pub fn apply(&mut self, entries: &BTreeMap<String, Value>) -> Result<()> {
        // sweep.key validates its target against the finished config
        let (sweep, rest): (Vec<_>, Vec<_>) = entries.iter().partition(|(k, _)| k.starts_with("sweep."));
        for (k, v) in rest.into_iter().chain(sweep) {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn ramp_bounds(&self) -> (f64, f64) {
        (
            self.ramp.vmin.unwrap_or(-self.adc.vref),
            self.ramp.vmax.unwrap_or(self.adc.vref),
        )
    }

    pub fn tone_amplitude(&self) -> f64 {
        self.tone.amplitude.unwrap_or(self.adc.vref)
    }

    /// The converter as simulated: `seed` drives the noise generator.
    pub fn converter(&self) -> AdcConfig {
        AdcConfig {
            noise_seed: self.seed,
            ..self.adc.clone()
        }
    }

    pub fn compare_spec(&self) -> CompareSpec {
        CompareSpec {
            n_bits: self.compare.n_bits,
            fs: self.adc.fs,
            flash_sigma: self.compare.flash_sigma,
            flash_trials: self.compare.flash_trials,
            seed: self.seed,
            sd_amplitude: self.compare.sd_amplitude,
            sd_samples: self.compare.sd_samples,
            pipeline: self.converter(),
        }
    }

    /// Every key with its current value, as a TOML document with one table
    /// per dotted prefix.
    pub fn to_toml(&self) -> String {
        let mut keys = vec!["seed".to_string()];
        keys.extend(
            ["vref", "fs", "ota_sharing", "noise_sigma", "sharing_memory"]
                .map(|k| format!("adc.{k}")),
        );
        keys.extend(["gain_error", "offset", "tau", "aperture_skew"].map(|k| format!("sha.{k}")));
        for n in 1..=STAGE_COUNT {
            keys.extend(
                ["gain_error", "offset", "tau", "cmp_shift_lo", "cmp_shift_hi"]
                    .map(|k| format!("stages.{n}.{k}")),
            );
        }
        keys.extend((1..=3).map(|n| format!("flash.threshold_shift.{n}")));
        keys.push("ramp.samples".into());
        // unset bounds and amplitude follow vref
        if self.ramp.vmin.is_some() {
            keys.push("ramp.vmin".into());
        }
        if self.ramp.vmax.is_some() {
            keys.push("ramp.vmax".into());
        }
        keys.extend(["samples", "fin"].map(|k| format!("tone.{k}")));
        if self.tone.amplitude.is_some() {
            keys.push("tone.amplitude".into());
        }
        keys.push("tone.harmonics".into());
        keys.push("setup.cycles".into());
        keys.extend(["p_ota", "p_comparators", "p_digital_clock", "enob"].map(|k| format!("power.{k}")));
        keys.extend(
            ["n_bits", "flash_sigma", "flash_trials", "sd_amplitude", "sd_samples"]
                .map(|k| format!("compare.{k}")),
        );

        let mut out = String::new();
        let mut section = String::new();
        for key in keys {
            let value = self.current(&key).expect("listed keys are known");
            let (table, leaf) = key.rsplit_once('.').unwrap_or(("", key.as_str()));
            if table != section {
                out.push_str(&format!("\n[{table}]\n"));
                section = table.to_string();
            }
            out.push_str(&format!("{leaf} = {value}\n"));
        }
        out.trim_start().to_string()
    }
}
