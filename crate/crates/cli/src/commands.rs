//! The subcommands.

use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use donflow::checks::{run_suite, Suite, SuiteConfig, SuiteReport};
use donflow::flow::{hessian_probe, RunConfig, FAILURE_FILE};
use donflow::lattice::read_snapshot;
use donflow::Error;
use log::{error, info, warn};
use serde_json::json;

use crate::lock::DirLock;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NUMERICS: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

/// Command-line overrides of configuration keys.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig> {
    let mut config = match path {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &overrides.out {
        config.out_dir = out.clone();
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

/// Exit status of a library error: numerical failures are 2, everything
/// else (configuration, files) is 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::StepFailure { .. } | Error::DegenerateForm { .. } | Error::NoConvergence { .. },
        ) => EXIT_NUMERICS,
        _ => EXIT_CONFIG,
    }
}

fn report(result: Result<u8>) -> u8 {
    match result {
        Ok(code) => code,
        Err(e) => {
            error!("{e:#}");
            exit_code(&e)
        }
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(file, value).with_context(|| format!("writing {}", path.display()))
}

pub fn run(config: Option<&Path>, overrides: &Overrides) -> u8 {
    report((|| {
        let config = load_config(config, overrides)?;
        let _lock = DirLock::acquire(&config.out_dir)?;
        info!(
            "run: n = {}, scheme = {}, epsilon = {}, seed = {}",
            config.n,
            config.scheme.name(),
            config.epsilon,
            config.seed
        );
        match donflow::flow::run(&config) {
            Ok(summary) => {
                let m = &summary.monitors;
                info!(
                    "finished: {} steps, t = {:.6}, energy = {:.15}, residual = {:.3e}, stationary = {}",
                    summary.steps, summary.t, m.energy, m.residual_l2, summary.stationary
                );
                if !summary.stationary {
                    warn!("final time reached before the residual dropped below tol_stationary");
                }
                Ok(EXIT_OK)
            }
            Err(e) => {
                let path = config.out_dir.join(FAILURE_FILE);
                if path.exists() {
                    error!("diagnostic written to {}", path.display());
                }
                Err(e.into())
            }
        }
    })())
}

pub fn check(
    config: Option<&Path>,
    overrides: &Overrides,
    suites: &[String],
    samples: Option<usize>,
) -> u8 {
    report((|| {
        let mut config = load_config(config, overrides)?;
        if !suites.is_empty() {
            config.check_suite = suites.to_vec();
        }
        if let Some(samples) = samples {
            config.samples = samples;
        }
        config.validate()?;
        let suites = config
            .check_suite
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<donflow::Result<Vec<_>>>()?;
        let dir = config.report_dir();
        let _lock = DirLock::acquire(&dir)?;
        let suite_config = SuiteConfig {
            samples: config.samples,
            seed: config.seed,
            grid: config.grid()?,
        };

        let mut reports: Vec<SuiteReport> = Vec::new();
        for suite in suites {
            info!(
                "suite {suite}: {} samples, seed {}",
                config.samples, config.seed
            );
            let report = run_suite(suite, &suite_config)?;
            let suite_dir = dir.join(suite.name());
            std::fs::create_dir_all(&suite_dir)?;
            for c in &report.checks {
                write_json(&suite_dir.join(format!("{}.json", c.name)), c)?;
                println!(
                    "{:<5} {}/{}: rel_err {:.3e} (tolerance {:.1e}, {} of {} instances failed)",
                    if c.passed { "PASS" } else { "FAIL" },
                    suite,
                    c.name,
                    c.rel_err,
                    c.tolerance,
                    c.failures,
                    c.samples
                );
            }
            reports.push(report);
        }
        let passed = reports.iter().all(|r| r.passed);
        let summary = json!({
            "seed": config.seed,
            "samples": config.samples,
            "n": config.n,
            "scheme": config.scheme,
            "passed": passed,
            "suites": reports,
        });
        write_json(&dir.join("summary.json"), &summary)?;
        info!("reports written to {}", dir.display());
        Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
    })())
}

pub fn hessian(
    config: Option<&Path>,
    overrides: &Overrides,
    snapshot: &Path,
    directions: usize,
) -> u8 {
    report((|| {
        let config = load_config(config, overrides)?;
        let dir = config.report_dir();
        let _lock = DirLock::acquire(&dir)?;
        let (_, rho) = read_snapshot(snapshot)?;
        // the snapshot grid may be coarser than the configured one
        let kmax = config.kmax.min(rho.grid().n() / 2 - 1).max(1);
        match hessian_probe(&rho, config.seed, directions, kmax) {
            Ok(probe) => {
                for s in &probe.samples {
                    println!(
                        "direction {:3}: hessian {:.12e}  |rho_hat|^2 {:.12e}  quotient {:.12}",
                        s.index, s.hessian, s.l2_sq, s.quotient
                    );
                }
                println!(
                    "quotients in [{:.12}, {:.12}]",
                    probe.min_quotient, probe.max_quotient
                );
                let value = json!({ "snapshot": snapshot, "probe": probe });
                write_json(&dir.join("hessian.json"), &value)?;
                Ok(EXIT_OK)
            }
            Err(e) => {
                let kind = match e {
                    Error::DegenerateForm { .. } => "DegenerateForm",
                    _ => "Other",
                };
                let value = json!({ "snapshot": snapshot, "error": e.to_string(), "kind": kind });
                write_json(&dir.join("hessian_failure.json"), &value)?;
                Err(e.into())
            }
        }
    })())
}

pub fn init(path: Option<&Path>) -> u8 {
    report((|| {
        let text = RunConfig::default().to_json();
        match path {
            None => println!("{text}"),
            Some(p) => {
                if p.exists() {
                    anyhow::bail!("{} already exists", p.display());
                }
                std::fs::write(p, format!("{text}\n"))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Ok(EXIT_OK)
    })())
}
