use cir_core::CoreError;
use cir_stats::StatsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CirError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("scenario TS{id}: {source}")]
    Scenario {
        id: usize,
        #[source]
        source: Box<CirError>,
    },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CirError {
    pub fn in_scenario(self, id: usize) -> Self {
        match self {
            e @ CirError::Scenario { .. } => e,
            e => CirError::Scenario { id, source: Box::new(e) },
        }
    }
}

pub type Result<T, E = CirError> = std::result::Result<T, E>;
