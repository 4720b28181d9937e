//! Reductions from submodular to linear matroid secretary problems.
//!
//! Four randomized algorithms share one log format ([`TrialLog`]):
//!
//! | function | stream | learning set | membership |
//! |---|---|---|---|
//! | [`smsp_online`] | random arrivals | first `B(n, 1/2)` arrivals | greedy-accepted arrivals join `N` w.p. `p` |
//! | [`smsp_simulated`] | offline greedy order | implicit | `1/2` to `M`, then `p` to `N` |
//! | [`msmsp_online`] | random arrivals | first `B(n, p)` arrivals | every greedy-accepted arrival joins `N` |
//! | [`msmsp_simulated`] | offline greedy order | implicit | `p` to `M`, else `N` |
//!
//! In every case the linear algorithm is fed the elements outside the
//! learning set through [`PartialMsp`](crate::online::PartialMsp), with the
//! surrogate weight `w(u) = f(u | M_u)` for elements of `N` and 0 for the
//! rest. [`coupled_pair`] replaces all coins by fixed sets so the online and
//! simulated forms can be compared on one sample path.

mod algorithms;
mod bounds;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::objective::WeightVector;
use crate::online::OnlineError;

pub use algorithms::{coupled_pair, msmsp_online, msmsp_simulated, run, smsp_online, smsp_simulated, Algorithm};
pub use bounds::{
    bound_table, choose_p, laminar_beta, laminar_optimum, laminar_ratio, opt_probability_ratio, ratio_bound, BoundError,
    BoundRow,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("q = {q} is below 1/alpha = {inverse} for alpha = {alpha}")]
    QBelowInverseAlpha { q: f64, alpha: f64, inverse: f64 },
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Online(#[from] OnlineError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Nonmonotone,
    Monotone,
}

impl std::str::FromStr for Variant {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nonmonotone" => Ok(Variant::Nonmonotone),
            "monotone" => Ok(Variant::Monotone),
            other => Err(ReductionError::InvalidConfig(format!("unknown variant {other:?}"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Nonmonotone => "nonmonotone",
            Variant::Monotone => "monotone",
        })
    }
}

/// Parameters of one reduction run. Build with [`ReductionConfig::new`],
/// which validates every field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionConfig {
    pub p: f64,
    pub variant: Variant,
    /// Claimed competitive ratio of the linear algorithm.
    pub alpha: f64,
    /// Claimed cap on any element's selection probability.
    pub q: Option<f64>,
    /// Number of independent sets whose union bounds the linear output.
    pub k: Option<usize>,
}

impl ReductionConfig {
    pub fn new(p: f64, variant: Variant, alpha: f64, q: Option<f64>, k: Option<usize>) -> Result<Self, ReductionError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(ReductionError::InvalidConfig(format!("p = {p} is not in (0, 1)")));
        }
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(ReductionError::InvalidConfig(format!("alpha = {alpha} is below 1")));
        }
        if let Some(q) = q {
            if !(q > 0.0 && q <= 1.0) {
                return Err(ReductionError::InvalidConfig(format!("q = {q} is not in (0, 1]")));
            }
            // a relative slack absorbs rounding in q = 1/alpha
            if q * alpha < 1.0 - 1e-9 {
                return Err(ReductionError::QBelowInverseAlpha { q, alpha, inverse: 1.0 / alpha });
            }
        }
        if k == Some(0) {
            return Err(ReductionError::InvalidConfig("k must be at least 1".into()));
        }
        Ok(ReductionConfig { p, variant, alpha, q, k })
    }

    /// Configuration with `p` chosen by [`choose_p`].
    pub fn auto(variant: Variant, alpha: f64, q: Option<f64>, k: Option<usize>, opt_probability: bool) -> Result<Self, ReductionError> {
        let p = choose_p(alpha, variant, q, opt_probability)?;
        Self::new(p, variant, alpha, q, k)
    }
}

/// Everything one run did.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialLog {
    pub algorithm: Algorithm,
    pub variant: Variant,
    /// Length of the learning phase `X`; for the simulated forms, `|L|`
    /// with `L` the elements never passed to the linear algorithm.
    pub learning_len: usize,
    /// Learning set `L`, sorted.
    pub learning: Vec<usize>,
    /// Greedy set `M` in insertion order, so `greedy[..i]` is `M_u` for
    /// `u = greedy[i]`.
    pub greedy: Vec<usize>,
    /// Candidate set `N`, sorted.
    pub candidates: Vec<usize>,
    /// Zero-weight inputs `N₀` of the linear algorithm, sorted.
    pub zero_candidates: Vec<usize>,
    /// Order in which the non-learning elements reached the linear
    /// algorithm (before interleaving with `L`).
    pub linear_order: Vec<usize>,
    /// Surrogate weights: `f(u | M_u)` on `M ∪ N`, 0 elsewhere.
    pub weights: WeightVector,
    /// Linear algorithm output `Q` without the learning set, sorted.
    pub linear_output: Vec<usize>,
    /// `Q ∩ N`, sorted.
    pub output: Vec<usize>,
    pub f_empty: f64,
    pub f_greedy: f64,
    pub w_greedy: f64,
    pub w_candidates: f64,
    pub f_output: f64,
}

#[cfg(test)]
mod tests;
