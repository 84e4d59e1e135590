use thiserror::Error;

#[derive(Debug, Error)]
pub enum QcError {
    #[error("bracket endpoints do not straddle a sign change")]
    BracketInvalid,
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("unsupported pairing: {0}")]
    Pairing(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = QcError> = std::result::Result<T, E>;
