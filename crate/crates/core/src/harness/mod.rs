//! Instance generation, seeded Monte Carlo experiments and invariant suites.
//!
//! Everything here is driven by 64-bit seeds: a generator spec plus a seed
//! yields one instance, and an experiment seed plus a trial index yields one
//! trial tape. Re-running with the same inputs reproduces the output byte
//! for byte, on one thread or many.

mod experiment;
mod generate;
mod invariants;
mod shipped;
mod synthetic;

use thiserror::Error;

use crate::instance::InstanceError;
use crate::matroid::MatroidError;
use crate::objective::ObjectiveError;
use crate::online::OnlineError;
use crate::reduction::{BoundError, ReductionError};

pub use experiment::{
    run_trials, run_trials_on, Experiment, ExperimentConfig, InstanceSource, Mode, OutputFormat, PPolicy, StatisticRow,
    TrialAggregate, TrialRecord,
};
pub use generate::{generate_doc, generate_instance};
pub use invariants::{
    check_invariants, linear_for, InvariantConfig, InvariantEntry, InvariantReport, Status, Suite, SLACK_SE,
};
pub use shipped::{shipped_docs, shipped_instances, SHIPPED};
pub use synthetic::{KUnion, ScaledOptimum};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed generator spec: {0}")]
    BadGenerator(String),
    #[error("invalid experiment: {0}")]
    InvalidConfig(String),
    #[error("trial {trial}: {source}")]
    Trial { trial: usize, source: ReductionError },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Online(#[from] OnlineError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests;
