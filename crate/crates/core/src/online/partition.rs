use std::f64::consts::E;

use super::{beats, clamp_weight, Decision, OnlineAlgorithm, OnlineError, StreamSetup};
use crate::tape::{Coins, TapeCoins};

/// Learning-phase centre `ceil(n/e)`.
fn learning_centre(n: usize) -> usize {
    (n as f64 / E).ceil() as usize
}

/// `alpha(n) = (t/n - 1/e + sum_{j=t}^{n-1} 1/(e j))^-1` with `t = ceil(n/e)`:
/// the inverse of the probability that the partition algorithm accepts a
/// class maximum. `n` must be positive.
pub fn alpha_partition(n: usize) -> f64 {
    assert!(n >= 1, "alpha is defined for n >= 1");
    let t = learning_centre(n);
    let tail: f64 = (t.max(1)..n).map(|j| 1.0 / (E * j as f64)).sum();
    1.0 / (t as f64 / n as f64 - 1.0 / E + tail)
}

/// `alpha(n)` for every `n` in `1..=max` using prefix harmonic sums,
/// returned as a vector indexed by `n - 1`.
pub fn alpha_partition_sweep(max: usize) -> Vec<f64> {
    let mut harmonic = vec![0.0f64; max + 1];
    for j in 1..=max {
        harmonic[j] = harmonic[j - 1] + 1.0 / j as f64;
    }
    (1..=max)
        .map(|n| {
            let t = learning_centre(n);
            let tail = if t < n { harmonic[n - 1] - harmonic[t - 1] } else { 0.0 };
            1.0 / (t as f64 / n as f64 - 1.0 / E + tail / E)
        })
        .collect()
}

/// Online algorithm for unitary partition matroids.
///
/// Observes a learning phase of `X` elements (`X = t - 1` with probability
/// `t - n/e`, otherwise `t`). Afterwards the first element of an unmarked
/// class marks it and is accepted if it beats every earlier element of its
/// class; a class never seen before is marked and its first element is
/// accepted with probability `X / |L|` (1 when nothing has arrived yet).
pub struct PartitionMsp {
    class_of: Vec<usize>,
    learning: usize,
    coins: TapeCoins,
    arrived: usize,
    class_best: Vec<Option<(f64, usize)>>,
    marked: Vec<bool>,
    chosen: Vec<usize>,
}

impl PartitionMsp {
    pub fn new(setup: StreamSetup<'_>, mut coins: TapeCoins) -> Result<Self, OnlineError> {
        let class_of = setup.matroid.unitary_classes().ok_or(OnlineError::NotUnitaryPartition("partition"))?;
        let n = setup.len;
        let t = learning_centre(n);
        let learning = if t > 0 && coins.bernoulli(t as f64 - n as f64 / E) { t - 1 } else { t };
        let classes = class_of.iter().max().map_or(0, |&c| c + 1);
        Ok(PartitionMsp {
            class_of,
            learning,
            coins,
            arrived: 0,
            class_best: vec![None; classes],
            marked: vec![false; classes],
            chosen: Vec::new(),
        })
    }

    /// Length of the learning phase drawn for this stream.
    pub fn learning_len(&self) -> usize {
        self.learning
    }
}

impl OnlineAlgorithm for PartitionMsp {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision {
        let (w, negative) = clamp_weight(weight);
        let key = (w, u);
        let g = self.class_of[u];
        let mut accept = false;
        if self.arrived >= self.learning && !self.marked[g] {
            match self.class_best[g] {
                Some(best) => {
                    if beats(key, best) {
                        self.marked[g] = true;
                        accept = true;
                    }
                }
                None => {
                    self.marked[g] = true;
                    accept = self.arrived == 0 || self.coins.bernoulli(self.learning as f64 / self.arrived as f64);
                }
            }
        }
        if self.class_best[g].is_none_or(|b| beats(key, b)) {
            self.class_best[g] = Some(key);
        }
        self.arrived += 1;
        if accept && !negative {
            self.chosen.push(u);
            Decision::Accept
        } else {
            Decision::Reject
        }
    }

    fn finish(self: Box<Self>) -> Vec<usize> {
        let mut c = self.chosen;
        c.sort_unstable();
        c
    }
}
