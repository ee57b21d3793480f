//! Experiment harness, text formats and command-line front end for the
//! simulations in [`plrg_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod parallel;
pub mod plot;
pub mod report;

pub use config::{Experiment, ExperimentConfig};
pub use error::HarnessError;
pub use parallel::Parallel;
pub use report::{run, Report, RunOutcome};
