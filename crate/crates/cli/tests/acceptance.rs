//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use pipeline_adc::characterize::{enob_from_sndr, setup_test};
use pipeline_adc::model::STAGE_COUNT;
use pipeline_adc::{
    convert_waveform, flash_montecarlo, gen_ramp, gen_tone, power_model, sd_first_order,
    spectrum, AdcConfig, Converter, FlashConfig, PowerCalibration, SdConfig,
};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

const VREF: f64 = 0.6;
const FS: f64 = 166.6e6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

fn oracle(v: f64) -> i32 {
    ((v / VREF + 1.0) * 128.0).floor().clamp(0.0, 255.0) as i32
}

fn code_center(k: u32) -> f64 {
    (f64::from(k) + 0.5) / 128.0 * VREF - VREF
}

fn oracle_equivalence() -> Outcome {
    let cfg = AdcConfig::ideal();
    let grid = gen_ramp(4096, -VREF, VREF).unwrap();
    let codes = convert_waveform(&grid, &cfg).unwrap().codes;
    let worst_grid = grid
        .iter()
        .zip(&codes)
        .map(|(&v, &c)| (i32::from(c) - oracle(v)).abs())
        .max()
        .unwrap();
    let mut conv = Converter::new(cfg.clone()).unwrap();
    let centers_exact = (0..256).all(|k| {
        i32::from(conv.convert_sample(code_center(k), 0.0).unwrap().code) == k as i32
    });
    let mut runner = TestRunner::new_with_rng(
        PropConfig {
            cases: 1024,
            failure_persistence: None,
            ..PropConfig::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let random = runner
        .run(&(-VREF..VREF), |v| {
            let mut c = Converter::new(AdcConfig::ideal()).unwrap();
            let code = i32::from(c.convert_sample(v, 0.0).unwrap().code);
            prop_assert!((code - oracle(v)).abs() <= 1);
            Ok(())
        })
        .is_ok();
    check(
        worst_grid <= 1 && centers_exact && random,
        format!("grid max |diff| {worst_grid} code, centers exact {centers_exact}, random inputs ok {random}"),
    )
}

fn redundancy() -> Outcome {
    let s = VREF / 8.0;
    let patterns = [[s, s], [-s, -s], [s, -s], [-s, s], [s, 0.0], [0.0, s], [-s, 0.0], [0.0, -s]];
    let mut changed = 0;
    for stage in 0..STAGE_COUNT {
        for p in patterns {
            let mut cfg = AdcConfig::ideal();
            cfg.stages[stage].cmp_threshold_shift = p;
            let mut conv = Converter::new(cfg).unwrap();
            changed += (0..256u32)
                .filter(|&k| u32::from(conv.convert_sample(code_center(k), 0.0).unwrap().code) != k)
                .count();
        }
    }
    check(changed == 0, format!("{changed} code-center outputs changed over 6 stages x 8 shift patterns"))
}

fn enob_relation() -> Outcome {
    let e = enob_from_sndr(45.9);
    check(within(e, 7.332, 0.005), format!("SNDR 45.9 dB -> ENOB {e:.4}"))
}

fn ideal_dynamic() -> Outcome {
    let cfg = AdcConfig::ideal();
    let tone = gen_tone(8192, FS, 10.417e6, VREF, true).unwrap();
    let m = spectrum(&convert_waveform(&tone.samples, &cfg).unwrap(), 5).unwrap();
    check(
        within(m.sndr_db, 49.9, 0.3) && within(m.enob_bits, 8.0, 0.05),
        format!("SNDR {:.3} dB, ENOB {:.4}", m.sndr_db, m.enob_bits),
    )
}

fn setup_table() -> Outcome {
    let published = [
        ("SHA", 0.05),
        ("Stage1", 0.08),
        ("Stage2", 0.11),
        ("Stage3", 0.36),
        ("Stage4", 0.4),
        ("Stage5", 1.1),
        ("Stage6", 2.0),
    ];
    let report = setup_test(&AdcConfig::paper_point()).unwrap();
    let mut worst = 0.0f64;
    let mut cells = Vec::new();
    for (name, err) in published {
        let got = report.row(name).unwrap().error_pct;
        worst = worst.max((got - err).abs() / err);
        cells.push(format!("{name} {got:.3}%"));
    }
    check(
        worst <= 0.10,
        format!("{}; worst relative deviation {:.1}%", cells.join(", "), worst * 100.0),
    )
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn adc(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_adc"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("adc runs")
}

fn csv_row(path: &Path, first: &str) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .find(|l| first.is_empty() || l.starts_with(first))
        .map(|l| l.split(',').map(str::to_string).collect())
        .unwrap_or_default()
}

fn paper_point() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = repo_root().join("configs/paper_point.toml");
    let cfg = cfg.to_str().unwrap();
    let tone = adc(&["tone", "--config", cfg], dir.path());
    let ramp = adc(&["ramp", "--config", cfg], dir.path());
    if !(tone.status.success() && ramp.status.success()) {
        return check(false, "adc tone/ramp failed on configs/paper_point.toml");
    }
    let dynamic: Vec<f64> = std::fs::read_to_string(dir.path().join("dynamic.csv"))
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let (sndr, sfdr) = (dynamic[0], dynamic[1]);
    let summary = dir.path().join("static_summary.csv");
    let inl: f64 = csv_row(&summary, "max_inl")[1].parse().unwrap();
    let dnl: f64 = csv_row(&summary, "max_dnl")[1].parse().unwrap();
    check(
        within(sndr, 45.9, 1.0) && within(sfdr, 50.0, 2.0) && within(inl, 0.35, 0.1) && within(dnl, 0.24, 0.1),
        format!("SNDR {sndr:.2} dB, SFDR {sfdr:.2} dB, max|INL| {inl:.3} LSB, max|DNL| {dnl:.3} LSB"),
    )
}

fn sigma_delta_scaling() -> Outcome {
    let snr: Vec<f64> = [8, 16, 32, 64, 128]
        .into_iter()
        .map(|osr| {
            let cfg = SdConfig {
                osr,
                n_samples: 1 << 16,
                input_amplitude: 0.5,
            };
            sd_first_order(&cfg, 0.0005).unwrap().snr_db
        })
        .collect();
    let gains: Vec<f64> = snr.windows(2).map(|w| w[1] - w[0]).collect();
    check(
        gains.iter().all(|g| (6.0..=12.0).contains(g)),
        format!(
            "gain per octave {}",
            gains.iter().map(|g| format!("{g:.2}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn flash_monotonicity() -> Outcome {
    let mean = |sigma| {
        flash_montecarlo(&FlashConfig {
            n_bits: 8,
            ladder_sigma: sigma,
            n_trials: 1000,
            rng_seed: 0,
        })
        .unwrap()
        .mean_max_inl
    };
    let zero = mean(0.0);
    let m: Vec<f64> = [0.001, 0.01, 0.05].into_iter().map(mean).collect();
    check(
        zero == 0.0 && m[0] < m[1] && m[1] < m[2],
        format!("sigma 0 -> {zero}, 0.1% -> {:.4}, 1% -> {:.4}, 5% -> {:.4} LSB", m[0], m[1], m[2]),
    )
}

fn power() -> Outcome {
    let cal = PowerCalibration::default();
    let on = power_model(&AdcConfig::ideal(), &cal, 7.33).unwrap();
    let off_cfg = AdcConfig {
        ota_sharing: false,
        ..AdcConfig::ideal()
    };
    let off = power_model(&off_cfg, &cal, 7.33).unwrap();
    check(
        within(on.total_mw, 38.9, 1e-9)
            && off.total_mw > on.total_mw
            && (on.ota_count, off.ota_count) == (4, 7)
            && within(on.fom_pj_per_step, 1.45, 0.01),
        format!(
            "sharing on {:.3} mW ({} OTAs), off {:.3} mW ({} OTAs), FOM {:.4} pJ/step",
            on.total_mw, on.ota_count, off.total_mw, off.ota_count, on.fom_pj_per_step
        ),
    )
}

fn determinism() -> Outcome {
    let runs: [(&str, &[&str]); 6] = [
        ("setup", &[]),
        ("ramp", &[]),
        ("tone", &["adc.noise_sigma=5e-4"]),
        ("compare", &["compare.flash_trials=200"]),
        ("power", &[]),
        ("sweep", &["sweep.key=stages.1.gain_error", "sweep.values=[0.0, 0.005]"]),
    ];
    let mut differing = Vec::new();
    for (cmd, extra) in runs {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        for d in &dirs {
            let mut args = vec![cmd, "--seed", "42"];
            args.extend_from_slice(extra);
            if !adc(&args, d.path()).status.success() {
                differing.push(format!("{cmd} failed"));
            }
        }
        let mut files: Vec<_> = std::fs::read_dir(dirs[0].path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        files.sort();
        if files.is_empty() {
            differing.push(format!("{cmd} wrote nothing"));
        }
        for f in files {
            let a = std::fs::read(dirs[0].path().join(&f)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&f)).ok();
            if Some(a) != b {
                differing.push(format!("{cmd}/{}", f.to_string_lossy()));
            }
        }
    }
    check(
        differing.is_empty(),
        if differing.is_empty() {
            "all six subcommands byte-identical across two runs".to_string()
        } else {
            format!("differs: {}", differing.join(", "))
        },
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        ("1 oracle equivalence", oracle_equivalence, Some(Duration::from_secs(1))),
        ("2 redundancy correction", redundancy, Some(Duration::from_secs(5))),
        ("3 ENOB relation", enob_relation, None),
        ("4 ideal dynamic baseline", ideal_dynamic, Some(Duration::from_secs(2))),
        ("5 setup table", setup_table, None),
        ("6 reference operating point", paper_point, None),
        ("7 sigma-delta scaling", sigma_delta_scaling, Some(Duration::from_secs(10))),
        ("8 flash mismatch monotonicity", flash_monotonicity, None),
        ("9 power and FOM", power, None),
        ("10 CLI determinism", determinism, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let t0 = Instant::now();
        let mut o = f();
        let elapsed = t0.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                o.pass = false;
                o.detail.push_str(&format!("; took {elapsed:.2?} > {limit:?}"));
            }
        }
        println!(
            "{} {name}: {} [{:.2?}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed
        );
        failed += usize::from(!o.pass);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
