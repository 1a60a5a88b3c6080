use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric failure at t = {at}: {msg}")]
    Numeric { msg: String, at: f64 },

    #[error("quadrature did not converge: estimate {estimate} with error {error} (tolerance {tol})")]
    NoConvergence { estimate: f64, error: f64, tol: f64 },

    #[error("inconsistent geometry: {0}")]
    Geometry(String),

    #[error("point near a corner of curve {curve} at t = {t}: {msg}")]
    Corner { curve: usize, t: f64, msg: String },

    #[error("delta = {delta} too large: {msg}")]
    DeltaTooLarge { delta: f64, msg: String },

    #[error("mesh construction failed: {0}")]
    Mesh(String),

    #[error("triangle {id}: {msg}")]
    Triangle { id: usize, msg: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
