use super::{beats, clamp_weight, Decision, OnlineAlgorithm, OnlineError, StreamSetup};
use crate::matroid::MatroidOracle;
use crate::tape::{Coins, TapeCoins};

/// Probability that the rule "skip the first `r - 1` elements, then take the
/// first element better than everything seen" selects the maximum of `n`.
pub fn dynkin_best_prob(n: usize, r: usize) -> Result<f64, OnlineError> {
    if r < 1 || r > n {
        return Err(OnlineError::IndexOutOfRange { r, n });
    }
    if r == 1 {
        return Ok(1.0 / n as f64);
    }
    let tail: f64 = (r..=n).map(|j| 1.0 / (j - 1) as f64).sum();
    Ok((r - 1) as f64 / n as f64 * tail)
}

/// Threshold maximizing [`dynkin_best_prob`] (smallest on ties) and the
/// resulting success probability. `n = 0` gives `(1, 0)`.
pub fn best_threshold(n: usize) -> (usize, f64) {
    if n == 0 {
        return (1, 0.0);
    }
    // running form of the tail sum: p(r) = (r-1)/n * (H(n-1) - H(r-2))
    let h: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
    let mut best = (1, 1.0 / n as f64);
    let mut tail = h;
    for r in 2..=n {
        if r > 2 {
            tail -= 1.0 / (r - 2) as f64;
        }
        let p = (r - 1) as f64 / n as f64 * tail;
        if p > best.1 {
            best = (r, p);
        }
    }
    best
}

/// Classical secretary rule with the optimal threshold for `n` arrivals.
/// With `capped`, every tentative acceptance survives an extra coin of
/// probability `1/(e p(n))`; a failed coin ends the selection.
pub struct Dynkin<'a> {
    matroid: &'a MatroidOracle,
    threshold: usize,
    cap: Option<f64>,
    coins: TapeCoins,
    seen: usize,
    best: Option<(f64, usize)>,
    done: bool,
    chosen: Vec<usize>,
}

impl<'a> Dynkin<'a> {
    pub fn new(setup: StreamSetup<'a>, capped: bool, coins: TapeCoins) -> Self {
        let (threshold, p) = best_threshold(setup.len);
        let cap = capped.then(|| (1.0 / (std::f64::consts::E * p)).min(1.0));
        Dynkin { matroid: setup.matroid, threshold, cap, coins, seen: 0, best: None, done: false, chosen: Vec::new() }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }
}

impl OnlineAlgorithm for Dynkin<'_> {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision {
        let (w, negative) = clamp_weight(weight);
        self.seen += 1;
        let key = (w, u);
        let record = self.best.is_none_or(|b| beats(key, b));
        if record {
            self.best = Some(key);
        }
        if self.done || self.seen < self.threshold || !record {
            return Decision::Reject;
        }
        if let Some(c) = self.cap {
            if !self.coins.bernoulli(c) {
                self.done = true;
                return Decision::Reject;
            }
        }
        self.done = true;
        if negative || !self.matroid.can_extend(&[], u) {
            return Decision::Reject;
        }
        self.chosen.push(u);
        Decision::Accept
    }

    fn finish(self: Box<Self>) -> Vec<usize> {
        self.chosen
    }
}
