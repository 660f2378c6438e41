//! Flow state and the adaptive RK4 time step.

use serde::{Deserialize, Serialize};

use super::functional::{check_field_admissible, l1_report, rhs, u_min, Field2};
use crate::error::{Error, Result};
use crate::exterior4::U_FLOOR;
use crate::lattice::{cohomology, dealias_form2, CohomologyClass2, Grid};
use crate::scalar::Real;

/// Quantities recorded after every accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monitors<T> {
    pub energy: T,
    /// `E - 2 Vol(M)`, resolved below the round-off of `energy`.
    pub energy_excess: T,
    /// Flat `L^2` norm of the right-hand side.
    pub residual_l2: T,
    pub u_min: T,
    pub l1_norm: T,
    pub l1_bound: T,
    /// Largest change of a cohomology coordinate since the initial state.
    pub coh_drift_max: T,
}

impl<T: Real> Monitors<T> {
    pub fn to_f64(&self) -> Monitors<f64> {
        Monitors {
            energy: self.energy.as_f64(),
            energy_excess: self.energy_excess.as_f64(),
            residual_l2: self.residual_l2.as_f64(),
            u_min: self.u_min.as_f64(),
            l1_norm: self.l1_norm.as_f64(),
            l1_bound: self.l1_bound.as_f64(),
            coh_drift_max: self.coh_drift_max.as_f64(),
        }
    }
}

/// Step-size control of [`step`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl<T> {
    pub dt_max: T,
    /// Halvings allowed before a step is declared failed.
    pub max_retries: usize,
    /// Factor applied to `dt` after an accepted step.
    pub growth: T,
    pub dealias: bool,
}

impl<T: Real> StepControl<T> {
    pub fn new(dt_max: T) -> Self {
        StepControl {
            dt_max,
            max_retries: 20,
            growth: T::lit(1.1),
            dealias: false,
        }
    }
}

/// Largest `dt` for which classical RK4 is stable on the linearization at
/// the flat minimum, whose symbol is `-|k|^2` with the grid's discrete
/// wave numbers.
pub fn stability_limit<T: Real>(grid: Grid) -> T {
    let kmax = grid
        .symbols::<T>()
        .iter()
        .fold(T::zero(), |m, k| m.max(k.abs()));
    // RK4 covers [-2.78, 0] on the real axis; keep a margin
    T::lit(2.5) / (T::lit(4.0) * kmax * kmax)
}

/// Initial step `sigma h^2`.
pub fn initial_dt<T: Real>(grid: Grid, sigma: T) -> T {
    let h = grid.h::<T>();
    sigma * h * h
}

#[derive(Clone, Debug)]
pub struct FlowState<T> {
    rho: Field2<T>,
    t: T,
    dt: T,
    steps: usize,
    monitors: Monitors<T>,
    rhs: Field2<T>,
    class0: CohomologyClass2<T>,
}

impl<T: Real> FlowState<T> {
    /// State at time 0; the class of `rho` becomes the reference for the
    /// drift monitor. Fails with `DegenerateForm` if `u <= U_FLOOR` anywhere.
    pub fn new(rho: Field2<T>, dt: T) -> Result<Self> {
        let class0 = cohomology(&rho);
        Self::assemble(rho, T::zero(), dt, 0, class0)
    }

    fn assemble(
        rho: Field2<T>,
        t: T,
        dt: T,
        steps: usize,
        class0: CohomologyClass2<T>,
    ) -> Result<Self> {
        check_field_admissible(&rho)?;
        let rhs = rhs(&rho)?;
        let report = l1_report(&rho)?;
        let monitors = Monitors {
            energy: report.energy,
            energy_excess: report.excess,
            residual_l2: rhs.l2_norm(),
            u_min: u_min(&rho),
            l1_norm: report.l1_norm,
            l1_bound: report.l1_bound,
            coh_drift_max: cohomology(&rho).max_diff(&class0),
        };
        Ok(FlowState {
            rho,
            t,
            dt,
            steps,
            monitors,
            rhs,
            class0,
        })
    }

    pub fn rho(&self) -> &Field2<T> {
        &self.rho
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn monitors(&self) -> &Monitors<T> {
        &self.monitors
    }

    /// `d *^rho d Theta` at the current state.
    pub fn rhs(&self) -> &Field2<T> {
        &self.rhs
    }

    pub fn initial_class(&self) -> &CohomologyClass2<T> {
        &self.class0
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn is_stationary(&self, tol: T) -> bool {
        self.monitors.residual_l2 < tol
    }
}

/// One RK4 step of `d rho / dt = d *^rho d Theta` with backtracking.
///
/// A proposal is rejected when a stage or the result is degenerate
/// (`u <= U_FLOOR`), not finite, or has higher energy than the current
/// state; `dt` is then halved. After `max_retries` halvings the step fails
/// with `StepFailure`. On success the next `dt` is `min(growth dt, dt_max)`.
pub fn step<T: Real>(state: &FlowState<T>, ctl: &StepControl<T>) -> Result<FlowState<T>> {
    let mut dt = state.dt.min(ctl.dt_max);
    let mut reason = String::new();
    for _ in 0..=ctl.max_retries {
        match attempt(state, dt, ctl) {
            Ok(next) => return Ok(next.with_dt((dt * ctl.growth).min(ctl.dt_max))),
            Err(why) => {
                reason = why;
                dt *= T::lit(0.5);
            }
        }
    }
    Err(Error::StepFailure {
        t: state.t.as_f64(),
        dt: (dt * T::lit(2.0)).as_f64(),
        reason,
    })
}

fn attempt<T: Real>(
    state: &FlowState<T>,
    dt: T,
    ctl: &StepControl<T>,
) -> std::result::Result<FlowState<T>, String> {
    let describe = |stage: &str, e: Error| format!("{stage}: {e}");
    let half = dt * T::lit(0.5);
    let rho = &state.rho;
    let k1 = &state.rhs;
    let k2 = rhs(&rho.axpy(half, k1)).map_err(|e| describe("stage 2", e))?;
    let k3 = rhs(&rho.axpy(half, &k2)).map_err(|e| describe("stage 3", e))?;
    let k4 = rhs(&rho.axpy(dt, &k3)).map_err(|e| describe("stage 4", e))?;
    let sixth = dt / T::lit(6.0);
    let two = T::lit(2.0);
    let increment = k1.add(&k4).axpy(two, &k2.add(&k3));
    let mut next = rho.axpy(sixth, &increment);
    if ctl.dealias {
        next = dealias_form2(&next);
    }
    if !next.is_finite() {
        return Err("proposal is not finite".into());
    }
    let umin = u_min(&next);
    if !(umin > T::lit(U_FLOOR)) {
        return Err(format!("u_min = {:e} <= u_floor", umin.as_f64()));
    }
    let candidate = FlowState::assemble(next, state.t + dt, dt, state.steps + 1, state.class0)
        .map_err(|e| describe("result", e))?;
    let before = state.monitors.energy_excess;
    let after = candidate.monitors.energy_excess;
    // relative round-off of the excess quadrature
    let slack = T::lit(64.0) * T::epsilon() * before;
    if !(after <= before + slack) {
        return Err(format!(
            "energy increased: excess {:e} -> {:e}",
            before.as_f64(),
            after.as_f64()
        ));
    }
    Ok(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior4::Form2;
    use crate::flow::initial::omega1;
    use crate::lattice::Field;

    #[test]
    fn minimum_is_a_fixed_point() {
        let g = Grid::spectral(4).unwrap();
        let s = FlowState::new(Field::constant(g, omega1::<f64>()), 1e-3).unwrap();
        let next = step(&s, &StepControl::new(1e-2)).unwrap();
        assert_eq!(next.rho(), s.rho());
        assert_eq!(next.monitors().energy, 2.0);
        assert!((next.t() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn degenerate_start_is_rejected() {
        let g = Grid::spectral(4).unwrap();
        let flat = Field::constant(g, Form2([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(matches!(
            FlowState::new(flat, 1e-3),
            Err(Error::DegenerateForm { site: Some(0), .. })
        ));
    }
}
