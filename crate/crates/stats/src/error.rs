use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("correlation undefined for a constant series")]
    UndefinedCc,
}

pub type Result<T> = std::result::Result<T, StatsError>;
