use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain an operation supports.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A parameter record violated one of its invariants.
    #[error("invalid parameter '{key}': {detail}")]
    InvalidParam { key: &'static str, detail: String },

    /// Adaptive quadrature ran out of subdivisions before reaching tolerance.
    #[error("quadrature did not converge: estimated error {achieved:e} exceeds tolerance {tol:e}")]
    Quadrature { achieved: f64, tol: f64 },

    /// The adaptive integrator could not take a step.
    #[error("integration failed at t = {t}: {detail}")]
    Integration { t: f64, detail: String },

    /// An operation was called outside the regime its formulas assume.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config error for key '{key}': {detail}")]
    Config { key: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn config(key: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Config { key: key.into(), detail: detail.into() }
    }
}
