use thiserror::Error;

/// Errors raised by topology construction, channel assignment generation and
/// the capacity estimator.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("topology generation failed after {attempts} attempts: {reason}")]
    GenerationFailure { attempts: usize, reason: String },
    #[error("forward correction could not restore link ({0}, {1})")]
    CorrectionFailure(usize, usize),
    #[error("corpus underflow: only {achieved} distinct assignments of {requested} requested")]
    CorpusUnderflow { achieved: usize, requested: usize },
    #[error("routing failure: {} flow(s) unroutable, first {:?}", .0.len(), .0.first())]
    RoutingFailure(Vec<(usize, usize)>),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
