use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point:?} is outside the domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("parameter: {0}")]
    Parameter(String),
    #[error("convexity violation: {0}")]
    Convexity(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64, history: Vec<f64> },
    #[error("degenerate solution: {0}")]
    Degenerate(String),
    #[error("node set mismatch: {0}")]
    NodeMismatch(String),
    #[error("validation: {0}")]
    Validation(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Validation(e.to_string())
    }
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn geometry<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Geometry(msg.into()))
}
