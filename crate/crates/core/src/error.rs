use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated one of its admissible inequalities.
    #[error("{param} = {value} violates {constraint}")]
    Range {
        param: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    /// A series/asymptotic evaluation could not reach its error target.
    #[error("{what} did not converge (estimated error {est_error:e})")]
    Convergence { what: &'static str, est_error: f64 },

    #[error("quadrature failed: value {value} with estimated error {est_error:e}")]
    Quadrature { value: f64, est_error: f64 },

    #[error("operational time grids of parent and leading paths differ")]
    GridMismatch,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn range(param: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Range { param, value, constraint }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Range { .. } => "RangeError",
            Error::Unsupported(_) => "UnsupportedError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::Quadrature { .. } => "QuadratureError",
            Error::GridMismatch => "GridMismatchError",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::Format(_) => "FormatError",
        }
    }
}
