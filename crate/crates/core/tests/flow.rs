use std::f64::consts::PI;
use std::path::Path;

use donflow::exterior4::Form2;
use donflow::flow::{
    initial_rho, omega1, run, run_from, step, FailureReport, FlowState, RunConfig, StepControl,
    FAILURE_FILE, MONITOR_FILE,
};
use donflow::lattice::{read_snapshot, Field, Grid};
use donflow::Error;

/// `(1 + a cos 2 pi x0) e01 + e23` with `a = 1 - u_min`: closed, in the class
/// of `omega1`, and `u` touches `u_min` on the plane `x0 = 1/2`.
fn pinched(grid: Grid, u_min: f64) -> Field<Form2<f64>> {
    let a = 1.0 - u_min;
    Field::from_fn(grid, |s| {
        let x0 = grid.point::<f64>(s)[0];
        Form2([1.0 + a * (2.0 * PI * x0).cos(), 0.0, 0.0, 1.0, 0.0, 0.0])
    })
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|v| v.parse::<f64>().unwrap())
                .collect()
        })
        .collect()
}

fn config(dir: &Path) -> RunConfig {
    RunConfig {
        out_dir: dir.to_path_buf(),
        ..RunConfig::default()
    }
}

#[test]
fn near_degenerate_run_fails_with_a_finite_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::spectral(8).unwrap();
    let state = FlowState::new(pinched(grid, 1e-6), 1e-4).unwrap();
    assert!((state.monitors().u_min - 1e-6).abs() < 1e-12);
    let err = run_from(
        &RunConfig {
            t_final: 1.0,
            ..config(dir.path())
        },
        state,
        0.0,
    )
    .unwrap_err();
    assert!(matches!(err, Error::StepFailure { .. }), "{err}");

    let report: FailureReport =
        serde_json::from_reader(std::fs::File::open(dir.path().join(FAILURE_FILE)).unwrap())
            .unwrap();
    assert_eq!(report.kind, "StepFailure");
    let m = report.last_monitors;
    for v in [
        m.energy,
        m.energy_excess,
        m.residual_l2,
        m.u_min,
        m.l1_norm,
        m.l1_bound,
        m.coh_drift_max,
    ] {
        assert!(v.is_finite());
    }
    let rows = csv_rows(&dir.path().join(MONITOR_FILE));
    assert!(!rows.is_empty());
    assert!(rows.iter().flatten().all(|v| v.is_finite()));
    let (_, rho) = read_snapshot(&report.last_good_snapshot).unwrap();
    assert!(rho.is_finite());
}

#[test]
fn degenerate_initial_state_is_rejected() {
    let grid = Grid::spectral(8).unwrap();
    let err = FlowState::new(pinched(grid, 0.0), 1e-4).unwrap_err();
    assert!(
        matches!(err, Error::DegenerateForm { site: Some(_), .. }),
        "{err}"
    );
}

#[test]
fn run_from_the_minimum_is_immediately_stationary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&RunConfig {
        epsilon: 0.0,
        ..config(dir.path())
    })
    .unwrap();
    assert!(summary.stationary);
    assert_eq!(summary.steps, 0);
    assert_eq!(summary.monitors.energy, 2.0);
    let rows = csv_rows(&summary.monitor_csv);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], 2.0);
    let (_, rho) = read_snapshot(&summary.final_snapshot).unwrap();
    assert!(rho.values().iter().all(|w| *w == omega1()));
}

#[test]
fn short_run_decreases_energy_and_conserves_the_class() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&RunConfig {
        t_final: 0.02,
        out_every: 1,
        ..config(dir.path())
    })
    .unwrap();
    assert!(!summary.stationary);
    assert!((summary.t - 0.02).abs() < 1e-15);
    let rows = csv_rows(&summary.monitor_csv);
    assert_eq!(rows.len(), summary.steps + 1);
    for pair in rows.windows(2) {
        assert!(
            pair[1][2] <= pair[0][2],
            "energy increased: {} -> {}",
            pair[0][2],
            pair[1][2]
        );
        assert!(pair[1][0] > pair[0][0]);
    }
    assert!(rows.iter().all(|r| r[5] <= r[6] + 1e-10));
    assert!(summary.monitors.coh_drift_max < 1e-12);
    assert!(summary.monitors.energy_excess < summary.initial_monitors.energy_excess);
}

#[test]
fn oversized_step_is_reduced_automatically() {
    let grid = Grid::spectral(8).unwrap();
    let (rho, _) = initial_rho::<f64>(grid, 3, 0.05, 2).unwrap();
    let state = FlowState::new(rho, 1.0).unwrap();
    let next = step(&state, &StepControl::new(1.0)).unwrap();
    assert!(next.t() < 1e-2);
    assert!(next.monitors().energy_excess <= state.monitors().energy_excess);
}

#[test]
fn single_precision_flow_step() {
    let grid = Grid::spectral(4).unwrap();
    let (rho, _) = initial_rho::<f32>(grid, 1, 0.05, 1).unwrap();
    let state = FlowState::new(rho, 1e-3f32).unwrap();
    let next = step(&state, &StepControl::new(1e-3f32)).unwrap();
    assert!(next.rho().is_finite());
    assert!(next.monitors().energy <= state.monitors().energy + 1e-5);
    assert!(next.monitors().energy >= 2.0 - 1e-5);
}
