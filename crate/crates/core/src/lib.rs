//! Reduction from the submodular matroid secretary problem to its linear
//! counterpart, built around a black-box linear MSP algorithm.
//!
//! The crate is organised bottom-up:
//!
//! - [`matroid`]: exact independence, rank and span oracles for uniform,
//!   partition, graphic, laminar, transversal, sparse linear and restricted
//!   matroids, plus exhaustive axiom verification.
//! - [`objective`]: submodular value oracles, the convolution `f_w`, the
//!   stop-at-negative greedy and brute-force offline baselines.
//! - [`online`]: linear MSP subroutines (Dynkin, capped Dynkin, unitary
//!   partition, greedy acceptance) and the partial-MSP wrapper.
//! - [`reduction`]: the online and simulated reductions (non-monotone and
//!   monotone), the coupled pair, and closed-form parameter/bound calculators.
//! - [`harness`]: instance generation, seeded Monte Carlo trials, invariant
//!   suites and the CLI.
//!
//! Trials are embarrassingly parallel. With the default `parallel` feature
//! they run on the rayon pool; without it the same code runs sequentially
//! and produces identical results.

pub mod exec;
pub mod harness;
pub mod instance;
pub mod matroid;
pub mod objective;
pub mod online;
pub mod reduction;
pub mod stats;
pub mod tape;

pub use instance::{Instance, InstanceDoc};
pub use matroid::{GroundSet, MatroidError, MatroidOracle, MatroidSpec};
pub use objective::{ObjectiveError, ObjectiveOracle, ObjectiveSpec, WeightVector};
pub use tape::{Coins, RandomTape, Stream};

/// Absolute tolerance used when comparing objective values that should be
/// identical up to floating-point rounding.
pub const VALUE_TOLERANCE: f64 = 1e-9;
