//! Randomized identity suites with machine-readable reports.
//!
//! Every check compares two independently computed sides of an identity
//! over many seeded random instances and reports the worst instance. The
//! pointwise suites (`appendixA`, `theta`) draw `samples` instances; the
//! field suites (`fields`, `gradient`, `hessiancov`) use fixed instance
//! counts on the configured grid. Reports depend only on the seed and the
//! configuration, not on the number of threads.

mod fields;
mod pointwise;
pub mod sampling;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Grid, Scheme};

pub use fields::{fields_suite, gradient_suite, hessiancov_suite};
pub use pointwise::{appendix_a_suite, theta_suite};

/// Outcome of one check over all its instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub name: String,
    /// The identity being checked.
    pub reference: String,
    /// Left side at the worst instance (the worst component for forms).
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub grid_n: Option<usize>,
    pub scheme: Option<Scheme>,
    pub samples: usize,
    pub tolerance: f64,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "appendixA")]
    AppendixA,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "fields")]
    Fields,
    #[serde(rename = "gradient")]
    Gradient,
    #[serde(rename = "hessiancov")]
    HessianCov,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::AppendixA,
        Suite::Theta,
        Suite::Fields,
        Suite::Gradient,
        Suite::HessianCov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AppendixA => "appendixA",
            Suite::Theta => "theta",
            Suite::Fields => "fields",
            Suite::Gradient => "gradient",
            Suite::HessianCov => "hessiancov",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("`check_suite`: unknown suite \"{s}\"")))
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Instances drawn by the pointwise suites.
    pub samples: usize,
    pub seed: u64,
    /// Base grid of the field suites.
    pub grid: Grid,
}

/// Reports of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<DiagnosticReport>,
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::AppendixA => appendix_a_suite(config.samples, config.seed),
        Suite::Theta => theta_suite(config.samples, config.seed),
        Suite::Fields => fields_suite(config.grid, config.seed)?,
        Suite::Gradient => gradient_suite(config.grid, config.seed)?,
        Suite::HessianCov => hessiancov_suite(config.grid, config.seed)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite,
        seed: config.seed,
        samples: config.samples,
        passed,
        checks,
    })
}

/// One instance of one check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Outcome {
    pub name: &'static str,
    pub reference: &'static str,
    pub tolerance: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl Outcome {
    /// Compares two component vectors. The relative error divides by the
    /// largest of `scale` and the sup norms of both sides, so identities
    /// whose sides vanish are measured against the size of the inputs.
    pub fn compare(
        name: &'static str,
        reference: &'static str,
        tolerance: f64,
        lhs: &[f64],
        rhs: &[f64],
        scale: f64,
    ) -> Self {
        assert_eq!(lhs.len(), rhs.len());
        let mut worst = 0;
        let mut abs_err = 0.0f64;
        for i in 0..lhs.len() {
            let e = (lhs[i] - rhs[i]).abs();
            // NaN counts as the worst possible error
            if e.is_nan() || e > abs_err {
                worst = i;
                abs_err = if e.is_nan() { f64::INFINITY } else { e };
            }
        }
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let denom = scale.max(sup(lhs)).max(sup(rhs)).max(f64::MIN_POSITIVE);
        Outcome {
            name,
            reference,
            tolerance,
            lhs: lhs[worst],
            rhs: rhs[worst],
            abs_err,
            rel_err: abs_err / denom,
        }
    }

    pub fn scalar(
        name: &'static str,
        reference: &'static str,
        tolerance: f64,
        lhs: f64,
        rhs: f64,
        scale: f64,
    ) -> Self {
        Self::compare(name, reference, tolerance, &[lhs], &[rhs], scale)
    }

    /// An absolute comparison, for identities with a natural unit scale.
    pub fn absolute(
        name: &'static str,
        reference: &'static str,
        tolerance: f64,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).abs();
        let abs_err = if abs_err.is_nan() {
            f64::INFINITY
        } else {
            abs_err
        };
        Outcome {
            name,
            reference,
            tolerance,
            lhs,
            rhs,
            abs_err,
            rel_err: abs_err,
        }
    }

    /// A yes/no property; `lhs` and `rhs` carry the quantities it was
    /// decided on.
    pub fn holds(
        name: &'static str,
        reference: &'static str,
        ok: bool,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        let err = if ok { 0.0 } else { 1.0 };
        Outcome {
            name,
            reference,
            tolerance: 0.5,
            lhs,
            rhs,
            abs_err: err,
            rel_err: err,
        }
    }

    pub fn passed(&self) -> bool {
        self.rel_err <= self.tolerance
    }
}

/// Merges per-instance outcomes (same checks, same order in every
/// instance) into one report per check; the earliest worst instance wins.
pub(crate) fn merge(instances: &[Vec<Outcome>], grid: Option<Grid>) -> Vec<DiagnosticReport> {
    let Some(first) = instances.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|c| {
            let mut worst = first[c];
            let mut failures = 0;
            for inst in instances {
                let o = inst[c];
                debug_assert_eq!(o.name, worst.name, "instances disagree on the check order");
                if !o.passed() {
                    failures += 1;
                }
                if o.rel_err > worst.rel_err {
                    worst = o;
                }
            }
            DiagnosticReport {
                name: worst.name.to_string(),
                reference: worst.reference.to_string(),
                lhs: worst.lhs,
                rhs: worst.rhs,
                abs_err: worst.abs_err,
                rel_err: worst.rel_err,
                grid_n: grid.map(|g| g.n()),
                scheme: grid.map(|g| g.scheme()),
                samples: instances.len(),
                tolerance: worst.tolerance,
                failures,
                passed: failures == 0,
            }
        })
        .collect()
}

/// Runs `instance` for every sample index in parallel and merges.
pub(crate) fn run_instances(
    samples: usize,
    instance: impl Fn(u64) -> Vec<Outcome> + Sync + Send,
) -> Vec<DiagnosticReport> {
    let all: Vec<Vec<Outcome>> = (0..samples as u64).into_par_iter().map(instance).collect();
    merge(&all, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn compare_picks_worst_component_and_flags_nan() {
        let o = Outcome::compare("x", "x = y", 1e-9, &[1.0, 2.0], &[1.0, 2.5], 0.0);
        assert_eq!((o.lhs, o.rhs, o.abs_err), (2.0, 2.5, 0.5));
        assert!((o.rel_err - 0.2).abs() < 1e-15);
        let o = Outcome::compare("x", "x = y", 1e-9, &[f64::NAN], &[0.0], 1.0);
        assert!(!o.passed());
    }
}
