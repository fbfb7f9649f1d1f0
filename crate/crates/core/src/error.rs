use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input shape mismatch: expected length {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("size {n} exceeds the supported maximum of {max}")]
    Capacity { n: usize, max: usize },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("singular coefficient: schedule value s = {s} leaves no inertia")]
    SingularCoefficient { s: f64 },

    #[error("numerical blow-up at t = {t}")]
    NumericalBlowup { t: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no successful runtime found below {cap}")]
    NotFound { cap: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Stable machine-readable kind tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape { .. } => "shape",
            Error::Capacity { .. } => "capacity",
            Error::Domain(_) => "domain",
            Error::SingularCoefficient { .. } => "singular_coefficient",
            Error::NumericalBlowup { .. } => "numerical_blowup",
            Error::Numerical(_) => "numerical",
            Error::NotFound { .. } => "not_found",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Config(_) => "config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
