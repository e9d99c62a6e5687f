//! Polynomial least squares, significance bands and best/alternate model
//! selection.

pub mod regress;
pub mod sam;
pub mod special;

mod error;

pub use error::{Result, StatsError};
pub use regress::{
    classify_significance, count_outliers, fit_ols, pearson_cc, Dataset, Direction, RegressionModel, Significance,
};
pub use sam::{relationship_label, sam_select, RejectReason, SamConfig, SamVerdict};
