//! Command-line front end of the pipelined ADC simulator.
//!
//! `adc <setup|ramp|tone|compare|power|sweep> [--config FILE] [--out DIR]
//! [--seed N] [--ideal] [key=value ...]`
//!
//! Settings are layered: built-in defaults, then the config file, then
//! `--ideal` (drops every impairment), then `key=value` overrides, then
//! `--seed`.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use config::{ConfigError, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    /// Full-swing pulse settling table (setup.csv)
    Setup,
    /// Slow-ramp code-density INL/DNL (static.csv, static_summary.csv)
    Ramp,
    /// Coherent-tone spectrum (spectrum.csv, dynamic.csv)
    Tone,
    /// Sigma-delta / flash / pipeline comparison (compare.csv, compare.txt)
    Compare,
    /// Power breakdown and figure of merit (power.csv)
    Power,
    /// Tone and power over a parameter grid (sweep.csv)
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "adc", version, about = "Pipelined ADC behavioral simulator")]
pub struct Args {
    pub command: Subcommand,
    /// TOML configuration with dotted keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Seed for every random generator
    #[arg(long)]
    pub seed: Option<u64>,
    /// Zero every impairment before applying overrides
    #[arg(long)]
    pub ideal: bool,
    /// key=value overrides, applied in order
    pub overrides: Vec<String>,
}

pub fn load_config(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply(&config::read_file(path)?)?;
    }
    if args.ideal {
        cfg.adc = cfg.adc.without_impairments();
    }
    for o in &args.overrides {
        let (k, v) = config::parse_override(o)?;
        cfg.set(&k, &v)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.adc
        .validate()
        .map_err(|e| CliError::Usage(format!("invalid configuration: {e}")))?;
    Ok(cfg)
}

pub fn run(args: &Args) -> Result<commands::Output, CliError> {
    let cfg = load_config(args)?;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    let dir = args.out.as_path();
    match args.command {
        Subcommand::Setup => commands::setup(&cfg, dir),
        Subcommand::Ramp => commands::ramp(&cfg, dir),
        Subcommand::Tone => commands::tone(&cfg, dir),
        Subcommand::Compare => commands::compare(&cfg, dir),
        Subcommand::Power => commands::power(&cfg, dir),
        Subcommand::Sweep => commands::sweep(&cfg, dir),
    }
}
