//! Mesh topologies, channel assignments, interference estimation metrics,
//! channel assignment generators and an analytic capacity model.

pub mod assignment;
pub mod cagen;
pub mod capsim;
pub mod conflict;
pub mod error;
pub mod pwmn;
pub mod tiem;
pub mod topology;

pub use error::{CoreError, Result};
