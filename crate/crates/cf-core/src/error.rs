use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("quadrature did not converge: achieved error {achieved:.3e} > requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("capability missing: {0}")]
    Capability(String),

    #[error("infeasible: {what} (threshold {threshold:.6e})")]
    Infeasible { what: String, threshold: f64 },

    #[error("resource limit exceeded: {what} (required {required})")]
    Resource { what: String, required: u64 },

    #[error("inconsistent moments: radicand {0:.3e}")]
    InconsistentMoments(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Quadrature { .. } => "quadrature",
            Error::Capability(_) => "capability",
            Error::Infeasible { .. } => "infeasible",
            Error::Resource { .. } => "resource",
            Error::InconsistentMoments(_) => "inconsistent_moments",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
