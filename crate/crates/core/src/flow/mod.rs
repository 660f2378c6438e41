//! The Donaldson geometric flow `d rho / dt = d *^rho d Theta^rho` of
//! symplectic forms in a fixed cohomology class on the flat four-torus:
//! energy, gradient, Donaldson metric, Hessian, monitors and the explicit
//! time integrator.

pub mod config;
pub mod functional;
pub mod initial;
pub mod probe;
pub mod run;
pub mod state;

pub use config::RunConfig;
pub use functional::{
    check_field_admissible, donaldson_inner, donaldson_norm_sq, energy, energy_excess,
    first_variation, gradient, hessian_bilinear, hessian_form, integrate_wedge, l1_report,
    potential_inner, rho_metric_field, rhs, theta_dot_field, theta_field, u_field, u_min,
    EnergyReport, Field1, Field2, VOLUME,
};
pub use initial::{initial_rho, omega1, random_potential};
pub use probe::{flat_l2_sq, hessian_probe, HessianProbe, HessianSample};
pub use run::{
    initial_state, run, run_from, FailureReport, RunSummary, CSV_HEADER, FAILURE_FILE,
    MONITOR_FILE, SUMMARY_FILE,
};
pub use state::{initial_dt, stability_limit, step, FlowState, Monitors, StepControl};
