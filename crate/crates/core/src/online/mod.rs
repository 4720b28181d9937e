//! Linear matroid secretary algorithms.
//!
//! Every algorithm sees elements one at a time with a non-negative weight
//! and must decide immediately and irrevocably. The algorithms here are
//! used as the black-box `Linear` of the reductions:
//!
//! - [`Dynkin`]: the classical single-choice secretary rule, optionally
//!   capped so that no element is selected with probability above `1/e`.
//! - [`PartitionMsp`]: unitary partition matroids, selecting every optimal
//!   element with probability exactly `1/alpha(n)`.
//! - [`GreedyOnline`]: accept every positive element that keeps the
//!   solution independent.
//! - [`PartialMsp`]: wraps any of the above for streams where a known set
//!   of elements never arrives.

mod dynkin;
mod greedy_online;
mod partial;
mod partition;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::MatroidOracle;
use crate::tape::TapeCoins;

pub use dynkin::{best_threshold, dynkin_best_prob, Dynkin};
pub use greedy_online::GreedyOnline;
pub use partial::PartialMsp;
pub use partition::{alpha_partition, alpha_partition_sweep, PartitionMsp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OnlineError {
    #[error("threshold {r} is outside 1..={n}")]
    IndexOutOfRange { r: usize, n: usize },
    #[error("{0} needs a unitary partition matroid")]
    NotUnitaryPartition(&'static str),
    #[error("unknown linear algorithm {0:?} (expected dynkin, dynkin-capped, partition or greedy-online)")]
    UnknownLinear(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn accepted(self) -> bool {
        self == Decision::Accept
    }
}

/// An online algorithm for one stream.
pub trait OnlineAlgorithm {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision;
    /// Selected elements, sorted by id.
    fn finish(self: Box<Self>) -> Vec<usize>;
}

/// What an algorithm is told before the first arrival.
#[derive(Clone, Copy, Debug)]
pub struct StreamSetup<'a> {
    /// Total number of arrivals.
    pub len: usize,
    /// Independence oracle; only queried on elements that have arrived.
    pub matroid: &'a MatroidOracle,
}

/// Competitiveness claimed for a linear algorithm: it is `alpha`-competitive
/// and selects no element with probability above `q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Guarantee {
    pub alpha: f64,
    pub q: f64,
}

/// Builds a fresh algorithm instance per stream.
pub trait LinearFactory: Sync {
    fn name(&self) -> String;

    fn start<'a>(&self, setup: StreamSetup<'a>, coins: TapeCoins) -> Result<Box<dyn OnlineAlgorithm + 'a>, OnlineError>;

    /// Guarantee on `matroid` for streams of `n` elements, if known.
    fn guarantee(&self, n: usize, matroid: &MatroidOracle) -> Option<Guarantee>;
}

/// The built-in linear algorithms, by CLI key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearKey {
    Dynkin,
    DynkinCapped,
    Partition,
    GreedyOnline,
}

impl LinearKey {
    pub const ALL: [LinearKey; 4] = [LinearKey::Dynkin, LinearKey::DynkinCapped, LinearKey::Partition, LinearKey::GreedyOnline];

    pub fn as_str(self) -> &'static str {
        match self {
            LinearKey::Dynkin => "dynkin",
            LinearKey::DynkinCapped => "dynkin-capped",
            LinearKey::Partition => "partition",
            LinearKey::GreedyOnline => "greedy-online",
        }
    }
}

impl fmt::Display for LinearKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LinearKey {
    type Err = OnlineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LinearKey::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| OnlineError::UnknownLinear(s.to_string()))
    }
}

impl LinearFactory for LinearKey {
    fn name(&self) -> String {
        self.as_str().to_string()
    }

    fn start<'a>(&self, setup: StreamSetup<'a>, coins: TapeCoins) -> Result<Box<dyn OnlineAlgorithm + 'a>, OnlineError> {
        Ok(match self {
            LinearKey::Dynkin => Box::new(Dynkin::new(setup, false, coins)),
            LinearKey::DynkinCapped => Box::new(Dynkin::new(setup, true, coins)),
            LinearKey::Partition => Box::new(PartitionMsp::new(setup, coins)?),
            LinearKey::GreedyOnline => Box::new(GreedyOnline::new(setup)),
        })
    }

    fn guarantee(&self, n: usize, matroid: &MatroidOracle) -> Option<Guarantee> {
        let e = std::f64::consts::E;
        let rank_one = matroid.uniform_rank() == Some(1);
        match self {
            LinearKey::Dynkin => rank_one.then_some(Guarantee { alpha: e, q: 1.0 }),
            LinearKey::DynkinCapped => rank_one.then_some(Guarantee { alpha: e, q: 1.0 / e }),
            LinearKey::Partition => matroid.unitary_classes().map(|_| {
                let alpha = alpha_partition(n.max(1));
                Guarantee { alpha, q: 1.0 / alpha }
            }),
            // Among the positive elements, the first k in random order are
            // kept, so each is selected with probability at least k/n.
            LinearKey::GreedyOnline => match matroid.uniform_rank() {
                Some(k) if k >= 1 && n >= 1 => Some(Guarantee { alpha: (n as f64 / k as f64).max(1.0), q: 1.0 }),
                _ => None,
            },
        }
    }
}

/// Orders `(weight, id)` pairs lexicographically, the tie-breaking rule that
/// makes all weights distinct.
pub(crate) fn beats(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Negative and NaN weights become zero.
pub(crate) fn clamp_weight(w: f64) -> (f64, bool) {
    if w >= 0.0 {
        (w, false)
    } else {
        (0.0, true)
    }
}
