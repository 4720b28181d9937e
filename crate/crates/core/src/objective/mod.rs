//! Submodular value oracles.
//!
//! An [`ObjectiveSpec`] is compiled against a ground set into an
//! [`ObjectiveOracle`]. Values are computed on the sorted, de-duplicated
//! set, so the result never depends on the order in which a caller lists
//! the elements. This matters for pathwise comparisons of two algorithms
//! that build the same set in different orders.

mod convolution;
mod greedy;
mod offline;
mod submodular;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{build_matroid, GroundSet, MatroidError, MatroidOracle, MatroidSpec};

pub use convolution::{convolve_fw, CONVOLUTION_LIMIT};
pub use greedy::{greedy, greedy_run, greedy_scan, max_weight_independent, GreedyRun, GreedyStep};
pub use offline::{offline_opt, OFFLINE_LIMIT};
pub use submodular::{check_set_function, check_submodular, SubmodularReport, Violation, SUBMODULAR_LIMIT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObjectiveError {
    #[error("element {0} is not in the ground set")]
    UnknownElement(usize),
    #[error("element {0} is already in the set")]
    ElementAlreadyInSet(usize),
    #[error("set of size {size} exceeds the exact convolution limit {limit}")]
    SetTooLargeForExactConvolution { size: usize, limit: usize },
    #[error("ground set of size {n} exceeds the exact optimum limit {limit}")]
    GroundTooLargeForExactOpt { n: usize, limit: usize },
    #[error("ground set of size {n} exceeds the exhaustive limit {limit}")]
    GroundTooLarge { n: usize, limit: usize },
    #[error("invalid objective: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Declarative objective description. Per-element tables are indexed by
/// element id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveSpec {
    /// `f(S) = sum of weights[u]`.
    Linear { weights: Vec<f64> },
    /// Weighted size of the union of the item sets covered by `S`. Item
    /// weights default to 1.
    Coverage {
        covers: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        item_weights: Option<Vec<f64>>,
    },
    /// `f(S) = max of weights[u]`, 0 on the empty set.
    MaxWeight { weights: Vec<f64> },
    /// Largest weight of an independent subset of `S` in `matroid`.
    WeightedRank { matroid: MatroidSpec, weights: Vec<f64> },
    /// Total weight of the edges with exactly one endpoint in `S`; the
    /// vertices are the elements. Non-monotone.
    Cut { edges: Vec<(usize, usize, f64)> },
    /// `base + offset`, making `f(∅)` positive.
    Shifted { base: Box<ObjectiveSpec>, offset: f64 },
    /// Arbitrary set function given by its value on every bitmask of the
    /// dense ground set. Nothing is assumed about it.
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone)]
enum Compiled {
    Linear(Vec<f64>),
    Coverage { covers: Vec<Vec<u64>>, item_weights: Vec<f64> },
    MaxWeight(Vec<f64>),
    WeightedRank { matroid: MatroidOracle, weights: Vec<f64> },
    Cut { edges: Vec<(usize, usize, f64)>, ids: usize },
    Shifted { base: Box<Compiled>, offset: f64 },
    Table(Vec<f64>),
}

/// Non-negative weights indexed by element id; unassigned entries are 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WeightVector {
    values: Vec<f64>,
}

impl WeightVector {
    pub fn zeros(len: usize) -> Self {
        WeightVector { values: vec![0.0; len] }
    }

    /// Negative and NaN inputs become 0.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        WeightVector { values: values.into_iter().map(clamp).collect() }
    }

    pub fn set(&mut self, u: usize, w: f64) {
        if u >= self.values.len() {
            self.values.resize(u + 1, 0.0);
        }
        self.values[u] = clamp(w);
    }

    pub fn get(&self, u: usize) -> f64 {
        self.values.get(u).copied().unwrap_or(0.0)
    }

    /// `w(S)`, summed in ascending id order.
    pub fn sum(&self, set: &[usize]) -> f64 {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        s.iter().map(|&u| self.get(u)).sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

fn clamp(w: f64) -> f64 {
    if w > 0.0 {
        w
    } else {
        0.0
    }
}

/// Compiled objective. Apart from the relaxed query counter it is immutable
/// and can be shared across threads.
#[derive(Debug)]
pub struct ObjectiveOracle {
    ground: GroundSet,
    spec: ObjectiveSpec,
    compiled: Compiled,
    calls: AtomicU64,
}

impl Clone for ObjectiveOracle {
    fn clone(&self) -> Self {
        ObjectiveOracle {
            ground: self.ground.clone(),
            spec: self.spec.clone(),
            compiled: self.compiled.clone(),
            calls: AtomicU64::new(self.call_count()),
        }
    }
}

pub fn build_objective(spec: ObjectiveSpec, ground: &GroundSet) -> Result<ObjectiveOracle, ObjectiveError> {
    let compiled = compile(&spec, ground)?;
    Ok(ObjectiveOracle { ground: ground.clone(), spec, compiled, calls: AtomicU64::new(0) })
}

fn weights_for(ground: &GroundSet, weights: &[f64], what: &str) -> Result<Vec<f64>, ObjectiveError> {
    for &u in ground.elements() {
        match weights.get(u) {
            None => return Err(ObjectiveError::InvalidSpec(format!("no {what} for element {u}"))),
            Some(w) if !(w.is_finite() && *w >= 0.0) => {
                return Err(ObjectiveError::InvalidSpec(format!("{what} of element {u} is {w}")))
            }
            _ => {}
        }
    }
    Ok(weights.to_vec())
}

fn compile(spec: &ObjectiveSpec, ground: &GroundSet) -> Result<Compiled, ObjectiveError> {
    Ok(match spec {
        ObjectiveSpec::Linear { weights } => Compiled::Linear(weights_for(ground, weights, "weight")?),
        ObjectiveSpec::MaxWeight { weights } => Compiled::MaxWeight(weights_for(ground, weights, "weight")?),
        ObjectiveSpec::Coverage { covers, item_weights } => {
            let universe = covers.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
            let item_weights = match item_weights {
                Some(iw) => {
                    if iw.len() < universe {
                        return Err(ObjectiveError::InvalidSpec(format!(
                            "{} item weights for a universe of {universe} items",
                            iw.len()
                        )));
                    }
                    if let Some(bad) = iw.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
                        return Err(ObjectiveError::InvalidSpec(format!("item weight {bad}")));
                    }
                    iw.clone()
                }
                None => vec![1.0; universe],
            };
            let words = item_weights.len().div_ceil(64);
            let mut bits = vec![vec![0u64; words]; ground.id_bound()];
            for &u in ground.elements() {
                let items = covers
                    .get(u)
                    .ok_or_else(|| ObjectiveError::InvalidSpec(format!("no cover list for element {u}")))?;
                for &i in items {
                    bits[u][i / 64] |= 1 << (i % 64);
                }
            }
            Compiled::Coverage { covers: bits, item_weights }
        }
        ObjectiveSpec::WeightedRank { matroid, weights } => Compiled::WeightedRank {
            matroid: build_matroid(matroid.clone(), ground.clone())?,
            weights: weights_for(ground, weights, "weight")?,
        },
        ObjectiveSpec::Cut { edges } => {
            for &(a, b, w) in edges {
                if !ground.contains(a) || !ground.contains(b) {
                    return Err(ObjectiveError::InvalidSpec(format!("cut edge ({a}, {b}) leaves the ground set")));
                }
                if !(w.is_finite() && w >= 0.0) {
                    return Err(ObjectiveError::InvalidSpec(format!("cut edge weight {w}")));
                }
            }
            Compiled::Cut { edges: edges.clone(), ids: ground.id_bound() }
        }
        ObjectiveSpec::Shifted { base, offset } => {
            if !(offset.is_finite() && *offset >= 0.0) {
                return Err(ObjectiveError::InvalidSpec(format!("offset {offset}")));
            }
            Compiled::Shifted { base: Box::new(compile(base, ground)?), offset: *offset }
        }
        ObjectiveSpec::Table { values } => {
            let bound = ground.id_bound();
            if bound >= usize::BITS as usize || values.len() != 1 << bound {
                return Err(ObjectiveError::InvalidSpec(format!(
                    "table of {} values does not cover the subsets of {bound} ids",
                    values.len()
                )));
            }
            Compiled::Table(values.clone())
        }
    })
}

impl ObjectiveOracle {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    /// Number of value queries answered so far.
    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Whether the spec family guarantees monotonicity.
    pub fn is_monotone(&self) -> bool {
        spec_is_monotone(&self.spec)
    }

    fn check(&self, set: &[usize]) -> Result<Vec<usize>, ObjectiveError> {
        let mut s = set.to_vec();
        if let Some(&bad) = s.iter().find(|&&u| !self.ground.contains(u)) {
            return Err(ObjectiveError::UnknownElement(bad));
        }
        s.sort_unstable();
        s.dedup();
        Ok(s)
    }

    pub fn evaluate(&self, set: &[usize]) -> Result<f64, ObjectiveError> {
        let s = self.check(set)?;
        Ok(self.value_sorted(&s))
    }

    /// `f(S + u) - f(S)`.
    pub fn marginal(&self, u: usize, set: &[usize]) -> Result<f64, ObjectiveError> {
        let s = self.check(set)?;
        if !self.ground.contains(u) {
            return Err(ObjectiveError::UnknownElement(u));
        }
        let pos = match s.binary_search(&u) {
            Ok(_) => return Err(ObjectiveError::ElementAlreadyInSet(u)),
            Err(p) => p,
        };
        let mut with = s.clone();
        with.insert(pos, u);
        Ok(self.value_sorted(&with) - self.value_sorted(&s))
    }

    /// Value of a set the caller has already validated; sorts a copy when
    /// needed.
    pub(crate) fn value(&self, set: &[usize]) -> f64 {
        if set.windows(2).all(|w| w[0] < w[1]) {
            self.value_sorted(set)
        } else {
            let mut s = set.to_vec();
            s.sort_unstable();
            s.dedup();
            self.value_sorted(&s)
        }
    }

    fn value_sorted(&self, s: &[usize]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        eval(&self.compiled, s)
    }
}

fn spec_is_monotone(spec: &ObjectiveSpec) -> bool {
    match spec {
        ObjectiveSpec::Linear { .. }
        | ObjectiveSpec::Coverage { .. }
        | ObjectiveSpec::MaxWeight { .. }
        | ObjectiveSpec::WeightedRank { .. } => true,
        ObjectiveSpec::Cut { .. } | ObjectiveSpec::Table { .. } => false,
        ObjectiveSpec::Shifted { base, .. } => spec_is_monotone(base),
    }
}

fn eval(c: &Compiled, s: &[usize]) -> f64 {
    match c {
        Compiled::Linear(w) => s.iter().map(|&u| w[u]).sum(),
        Compiled::MaxWeight(w) => s.iter().map(|&u| w[u]).fold(0.0, f64::max),
        Compiled::Coverage { covers, item_weights } => {
            let mut union = vec![0u64; item_weights.len().div_ceil(64)];
            for &u in s {
                for (acc, bits) in union.iter_mut().zip(&covers[u]) {
                    *acc |= bits;
                }
            }
            let mut total = 0.0;
            for (word, &bits) in union.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    total += item_weights[word * 64 + b.trailing_zeros() as usize];
                    b &= b - 1;
                }
            }
            total
        }
        Compiled::WeightedRank { matroid, weights } => {
            max_weight_independent(matroid, weights, s).iter().map(|&u| weights[u]).sum()
        }
        Compiled::Cut { edges, ids } => {
            let mut member = vec![false; *ids];
            for &u in s {
                member[u] = true;
            }
            edges.iter().filter(|&&(a, b, _)| member[a] != member[b]).map(|e| e.2).sum()
        }
        Compiled::Shifted { base, offset } => eval(base, s) + offset,
        Compiled::Table(values) => values[s.iter().fold(0usize, |m, &u| m | 1 << u)],
    }
}

#[cfg(test)]
mod tests;
