//! Run configuration, read from JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Grid, Scheme};

/// Everything a flow run or a check suite needs. Unknown keys are rejected;
/// missing keys take the defaults of [`RunConfig::default`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Grid points per axis (even, at least 4).
    pub n: usize,
    pub scheme: Scheme,
    /// Apply the 2/3-rule truncation to `rho` after every accepted step.
    pub dealias: bool,
    /// Initial step `dt0 = sigma_cfl * h^2`.
    pub sigma_cfl: f64,
    /// Largest step. Defaults to the linear stability limit of the
    /// integrator at the flat minimum.
    pub dt_max: Option<f64>,
    /// Final time.
    #[serde(rename = "T")]
    pub t_final: f64,
    /// Stop once the flat `L^2` norm of the right-hand side drops below this.
    pub tol_stationary: f64,
    pub seed: u64,
    /// Amplitude of the initial perturbation; `0` starts at the minimum.
    pub epsilon: f64,
    /// Largest frequency of the random initial potential.
    pub kmax: usize,
    /// Write a monitor row every this many steps.
    pub out_every: usize,
    /// Also write a snapshot every this many steps (initial and final
    /// snapshots are always written).
    pub snapshot_every: Option<usize>,
    pub out_dir: PathBuf,
    /// Identity suites run by `check`.
    pub check_suite: Vec<String>,
    /// Random instances per suite.
    pub samples: usize,
    /// Where `check` and `hessian` write their JSON reports (defaults to
    /// `out_dir/reports`).
    pub report_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 8,
            scheme: Scheme::Spectral,
            dealias: false,
            sigma_cfl: 0.2,
            dt_max: None,
            t_final: 10.0,
            tol_stationary: 1e-8,
            seed: 0,
            epsilon: 0.05,
            kmax: 2,
            out_every: 10,
            snapshot_every: None,
            out_dir: PathBuf::from("out"),
            check_suite: ["appendixA", "theta", "fields", "gradient", "hessiancov"]
                .map(String::from)
                .to_vec(),
            samples: 1000,
            report_path: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.scheme).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, why: &str| Err(Error::Config(format!("`{key}`: {why}")));
        if self.n < 4 || !self.n.is_multiple_of(2) {
            return bad("n", "must be even and >= 4");
        }
        if !(self.sigma_cfl > 0.0 && self.sigma_cfl.is_finite()) {
            return bad("sigma_cfl", "must be positive");
        }
        if let Some(dt) = self.dt_max {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad("dt_max", "must be positive");
            }
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad("T", "must be finite and >= 0");
        }
        if !(self.tol_stationary > 0.0) {
            return bad("tol_stationary", "must be positive");
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon", "must be finite and >= 0");
        }
        if self.kmax == 0 || 2 * self.kmax >= self.n {
            return bad("kmax", "must satisfy 1 <= kmax < n/2");
        }
        if self.out_every == 0 {
            return bad("out_every", "must be >= 1");
        }
        if self.snapshot_every == Some(0) {
            return bad("snapshot_every", "must be >= 1");
        }
        if self.samples == 0 {
            return bad("samples", "must be >= 1");
        }
        Ok(())
    }

    pub fn report_dir(&self) -> PathBuf {
        self.report_path
            .clone()
            .unwrap_or_else(|| self.out_dir.join("reports"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
        assert_eq!(RunConfig::from_json("{}").unwrap(), c);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = RunConfig::from_json(r#"{"n": 8, "grid_size": 3}"#).unwrap_err();
        assert!(err.to_string().contains("grid_size"), "{err}");
    }

    #[test]
    fn invalid_values_are_named() {
        let err = RunConfig::from_json(r#"{"n": 7}"#).unwrap_err();
        assert!(err.to_string().contains("`n`"), "{err}");
        let err = RunConfig::from_json(r#"{"kmax": 4}"#).unwrap_err();
        assert!(err.to_string().contains("kmax"), "{err}");
        let err = RunConfig::from_json(r#"{"T": -1}"#).unwrap_err();
        assert!(err.to_string().contains("`T`"), "{err}");
    }
}
