//! Linear algorithms that exist only to exercise the invariant suites.

use crate::matroid::MatroidOracle;
use crate::objective::max_weight_independent;
use crate::online::{Decision, Guarantee, LinearFactory, OnlineAlgorithm, OnlineError, StreamSetup};
use crate::tape::{Coins, TapeCoins};

/// Offline: records the whole stream and, with probability `1/alpha`,
/// returns a maximum-weight independent set of it (nothing otherwise).
///
/// Every element is selected with probability at most `1/alpha` and the
/// expected output weight is exactly `OPT / alpha`, on any matroid.
#[derive(Clone, Copy, Debug)]
pub struct ScaledOptimum {
    pub alpha: f64,
}

struct ScaledOptimumRun<'a> {
    matroid: &'a MatroidOracle,
    weights: Vec<f64>,
    seen: Vec<usize>,
    keep: bool,
}

impl LinearFactory for ScaledOptimum {
    fn name(&self) -> String {
        format!("scaled-optimum({})", self.alpha)
    }

    fn start<'a>(&self, setup: StreamSetup<'a>, mut coins: TapeCoins) -> Result<Box<dyn OnlineAlgorithm + 'a>, OnlineError> {
        Ok(Box::new(ScaledOptimumRun {
            matroid: setup.matroid,
            weights: vec![0.0; setup.matroid.ground().id_bound()],
            seen: Vec::new(),
            keep: coins.bernoulli(1.0 / self.alpha),
        }))
    }

    fn guarantee(&self, _n: usize, _matroid: &MatroidOracle) -> Option<Guarantee> {
        Some(Guarantee { alpha: self.alpha, q: 1.0 / self.alpha })
    }
}

impl OnlineAlgorithm for ScaledOptimumRun<'_> {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision {
        self.weights[u] = weight;
        self.seen.push(u);
        Decision::Reject
    }

    fn finish(self: Box<Self>) -> Vec<usize> {
        if self.keep {
            max_weight_independent(self.matroid, &self.weights, &self.seen)
        } else {
            Vec::new()
        }
    }
}

/// Maintains `k` independent sets, placing each positive-weight arrival in
/// the first set it extends. Outputs set `pick`, or the union of all sets
/// when `pick` is `None`.
///
/// The first set is exactly what greedy acceptance would select, so on a
/// uniform matroid of rank `r` the union is `n / r`-competitive.
#[derive(Clone, Copy, Debug)]
pub struct KUnion {
    pub k: usize,
    pub pick: Option<usize>,
}

struct KUnionRun<'a> {
    matroid: &'a MatroidOracle,
    sets: Vec<Vec<usize>>,
    pick: Option<usize>,
}

impl LinearFactory for KUnion {
    fn name(&self) -> String {
        format!("k-union({})", self.k)
    }

    fn start<'a>(&self, setup: StreamSetup<'a>, _coins: TapeCoins) -> Result<Box<dyn OnlineAlgorithm + 'a>, OnlineError> {
        Ok(Box::new(KUnionRun { matroid: setup.matroid, sets: vec![Vec::new(); self.k.max(1)], pick: self.pick }))
    }

    fn guarantee(&self, n: usize, matroid: &MatroidOracle) -> Option<Guarantee> {
        let r = matroid.uniform_rank()?;
        (r > 0 && n > 0).then(|| Guarantee { alpha: (n as f64 / r as f64).max(1.0), q: 1.0 })
    }
}

impl OnlineAlgorithm for KUnionRun<'_> {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision {
        if weight > 0.0 {
            let m = self.matroid;
            if let Some(set) = self.sets.iter_mut().find(|s| m.can_extend(s, u)) {
                set.push(u);
                return Decision::Accept;
            }
        }
        Decision::Reject
    }

    fn finish(self: Box<Self>) -> Vec<usize> {
        let KUnionRun { sets, pick, .. } = *self;
        let mut out: Vec<usize> = match pick {
            Some(i) => sets.into_iter().nth(i).unwrap_or_default(),
            None => sets.concat(),
        };
        out.sort_unstable();
        out
    }
}
