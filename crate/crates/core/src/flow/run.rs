//! The flow driver: integrates until stationarity or the final time and
//! writes the monitor CSV, snapshots and a summary.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::initial::initial_rho;
use super::state::{initial_dt, stability_limit, step, FlowState, Monitors, StepControl};
use crate::error::{Error, Result};
use crate::lattice::write_snapshot;

pub const CSV_HEADER: [&str; 8] = [
    "t",
    "dt",
    "energy",
    "residual_l2",
    "u_min",
    "l1_norm",
    "l1_bound",
    "coh_drift_max",
];

pub const MONITOR_FILE: &str = "monitors.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const FAILURE_FILE: &str = "failure.json";

/// Outcome of a completed run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub steps: usize,
    pub t: f64,
    pub dt: f64,
    /// Whether the residual dropped below `tol_stationary`.
    pub stationary: bool,
    /// Initial amplitude after the admissibility halvings.
    pub epsilon_used: f64,
    pub monitors: Monitors<f64>,
    pub initial_monitors: Monitors<f64>,
    /// Largest `l1_norm - l1_bound` seen at any recorded sample.
    pub l1_margin_max: f64,
    pub monitor_csv: PathBuf,
    pub final_snapshot: PathBuf,
}

/// Diagnostic written when a run aborts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailureReport {
    pub error: String,
    pub kind: String,
    pub steps: usize,
    pub t: f64,
    pub dt: f64,
    pub last_monitors: Monitors<f64>,
    pub last_good_snapshot: PathBuf,
}

struct MonitorWriter {
    csv: csv::Writer<File>,
    path: PathBuf,
    l1_margin_max: f64,
}

impl MonitorWriter {
    fn create(path: PathBuf) -> Result<Self> {
        let mut csv = csv::Writer::from_path(&path)?;
        csv.write_record(CSV_HEADER)?;
        csv.flush()?;
        Ok(MonitorWriter {
            csv,
            path,
            l1_margin_max: f64::NEG_INFINITY,
        })
    }

    fn row(&mut self, state: &FlowState<f64>) -> Result<()> {
        let m = state.monitors();
        let values = [
            state.t(),
            state.dt(),
            m.energy,
            m.residual_l2,
            m.u_min,
            m.l1_norm,
            m.l1_bound,
            m.coh_drift_max,
        ];
        self.csv
            .write_record(values.iter().map(|v| format!("{v:e}")))?;
        self.csv.flush()?;
        self.l1_margin_max = self.l1_margin_max.max(m.l1_norm - m.l1_bound);
        Ok(())
    }
}

fn snapshot(dir: &Path, stem: &str, state: &FlowState<f64>) -> Result<PathBuf> {
    let monitors = serde_json::to_value(state.monitors())?;
    let mut meta = serde_json::Map::new();
    meta.insert("steps".into(), state.steps().into());
    meta.insert("dt".into(), state.dt().into());
    meta.insert("monitors".into(), monitors);
    write_snapshot(
        dir,
        stem,
        state.rho(),
        state.t(),
        serde_json::Value::Object(meta),
    )
}

/// Builds the initial state of a run from its configuration.
pub fn initial_state(config: &RunConfig) -> Result<(FlowState<f64>, f64)> {
    config.validate()?;
    let grid = config.grid()?;
    let (rho, eps) = initial_rho::<f64>(grid, config.seed, config.epsilon, config.kmax)?;
    let dt_max = config.dt_max.unwrap_or_else(|| stability_limit(grid));
    let dt0 = initial_dt(grid, config.sigma_cfl).min(dt_max);
    Ok((FlowState::new(rho, dt0)?, eps))
}

/// Runs the flow described by `config`, writing into `config.out_dir`.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let (state, eps) = initial_state(config)?;
    run_from(config, state, eps)
}

/// Runs the flow from a given state. Outputs written before a failure are
/// flushed, and the failure is described in `failure.json`.
pub fn run_from(
    config: &RunConfig,
    state: FlowState<f64>,
    epsilon_used: f64,
) -> Result<RunSummary> {
    let dir = config.out_dir.clone();
    std::fs::create_dir_all(&dir)?;
    let grid = state.rho().grid();
    let mut ctl = StepControl::new(config.dt_max.unwrap_or_else(|| stability_limit(grid)));
    ctl.dealias = config.dealias;

    let mut writer = MonitorWriter::create(dir.join(MONITOR_FILE))?;
    writer.row(&state)?;
    snapshot(&dir, "snap_initial", &state)?;
    let initial_monitors = state.monitors().to_f64();

    let mut state = state;
    let mut last_row = 0;
    let stationary = loop {
        if state.is_stationary(config.tol_stationary) {
            break true;
        }
        if state.t() >= config.t_final {
            break false;
        }
        let mut ctl_now = ctl;
        // land exactly on the final time
        ctl_now.dt_max = ctl
            .dt_max
            .min((config.t_final - state.t()).max(f64::MIN_POSITIVE));
        match step(&state, &ctl_now) {
            Ok(next) => state = next,
            Err(e) => {
                if last_row != state.steps() {
                    writer.row(&state)?;
                }
                let good = snapshot(&dir, "snap_last_good", &state)?;
                let report = FailureReport {
                    error: e.to_string(),
                    kind: match e {
                        Error::StepFailure { .. } => "StepFailure".into(),
                        Error::DegenerateForm { .. } => "DegenerateForm".into(),
                        _ => "Other".into(),
                    },
                    steps: state.steps(),
                    t: state.t(),
                    dt: state.dt(),
                    last_monitors: state.monitors().to_f64(),
                    last_good_snapshot: good,
                };
                let f = File::create(dir.join(FAILURE_FILE))?;
                serde_json::to_writer_pretty(f, &report)?;
                return Err(e);
            }
        }
        if state.steps().is_multiple_of(config.out_every) {
            writer.row(&state)?;
            last_row = state.steps();
        }
        if let Some(every) = config.snapshot_every {
            if state.steps().is_multiple_of(every) {
                snapshot(&dir, &format!("snap_{:06}", state.steps()), &state)?;
            }
        }
    };
    if last_row != state.steps() {
        writer.row(&state)?;
    }
    let final_snapshot = snapshot(&dir, "snap_final", &state)?;
    let summary = RunSummary {
        steps: state.steps(),
        t: state.t(),
        dt: state.dt(),
        stationary,
        epsilon_used,
        monitors: state.monitors().to_f64(),
        initial_monitors,
        l1_margin_max: writer.l1_margin_max,
        monitor_csv: writer.path.clone(),
        final_snapshot,
    };
    serde_json::to_writer_pretty(File::create(dir.join(SUMMARY_FILE))?, &summary)?;
    Ok(summary)
}
