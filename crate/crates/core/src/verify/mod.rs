//! Experiment harness: configuration, suites and reports behind the CLI.

mod commands;
mod config;
mod report;
mod suites;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::incidence::IncidenceError;

pub use commands::{check, dims, sample, solve, verify};
pub use config::{
    load_problem, parse_config, resolve, CenterConfig, ClassConfig, Config, DatumConfig, Exact, ExperimentKind,
    ExperimentSection, FieldSection, FieldTag, JetConfig, Overrides, Problem, SCHEMA_VERSION,
};
pub use report::{
    CheckReport, DimsReport, FiberKind, Render, SampleOutput, SolveReport, SuiteReport, TrialRecord, VerifyReport,
};
pub use suites::{
    consistency_check, expand, jet_roundtrip, pencil_closed, random_sigma_fiber, run_suite, EXACT_THRESHOLD,
    GENERIC_THRESHOLD,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    /// Schema or value error, located by a JSON pointer.
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl VerifyError {
    /// Process exit code: every error is a usage or configuration problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
