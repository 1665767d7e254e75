use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error(
        "Matsubara sum did not converge after {terms} terms \
         (partial value {partial:e}, last term {last_term:e})"
    )]
    Convergence { terms: usize, partial: f64, last_term: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("statistics error: {0}")]
    Statistics(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("evaluation failed at z = {z:e} m: {source}")]
    AtSeparation {
        z: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{failed} of {total} separations failed; converged rows written to {dump}")]
    Incomplete { failed: usize, total: usize, dump: String },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
