use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("metric is not symmetric positive definite")]
    NonPositiveMetric,

    #[error("degenerate 2-form: u = {u:e}{}", site.map(|s| format!(" at site {s}")).unwrap_or_default())]
    DegenerateForm { u: f64, site: Option<usize> },

    #[error("wedge Gram matrix of the plane basis is not positive definite")]
    NotPositivePlane,

    #[error("2-form is not exact: relative projection residual {residual:e}")]
    NotExact { residual: f64 },

    #[error("conjugate gradients did not converge in {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("flow step failed at t = {t}, dt = {dt:e}: {reason}")]
    StepFailure { t: f64, dt: f64, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn degenerate(u: f64) -> Self {
        Error::DegenerateForm { u, site: None }
    }

    pub(crate) fn at_site(self, site: usize) -> Self {
        match self {
            Error::DegenerateForm { u, .. } => Error::DegenerateForm {
                u,
                site: Some(site),
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
