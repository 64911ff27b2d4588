//! Trial runner, JSON reports, fixture replay and the `ehs` command line
//! on top of `ehs-core`.

pub mod cli;
pub mod report;
pub mod runner;
pub mod text;

pub use report::{FailureRecord, IdentityReport, SampleRecord, SuiteReport};
pub use runner::{run_suite, run_trials, Precision, RunError, TrialConfig};
