//! The capacity-interference experiment: scenario enumeration, corpus
//! scoring, regression with model selection and report files.

pub mod config;
pub mod output;
pub mod pipeline;
pub mod scenario;

mod error;

pub use config::{PhyProfile, RunConfig, TopologyId};
pub use error::{CirError, Result};
pub use pipeline::{analyze, analyze_series, build_corpus, run_all, run_scenario, CorpusData, CorpusRow, RunOutcome};
pub use scenario::{enumerate_scenarios, scenario, CaType, Nature, ScenarioReport, ScenarioSpec};
