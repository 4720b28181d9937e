use super::{Decision, OnlineAlgorithm};
use crate::tape::{Coins, TapeCoins};

/// Runs an algorithm expecting all `n` elements on a stream where the known
/// set `L` never arrives.
///
/// Before each real arrival, while a uniform draw from `0..|L'| + r` lands
/// in the dummy range (`r` real elements still to come, `L'` the unused
/// known elements), a uniformly random element of `L'` is passed with
/// weight 0. The inner algorithm therefore sees a uniformly random
/// permutation of the ground set. Known elements are removed from the
/// output.
pub struct PartialMsp<'a> {
    inner: Box<dyn OnlineAlgorithm + 'a>,
    pending: Vec<usize>,
    known: Vec<usize>,
    remaining: usize,
    coins: TapeCoins,
}

impl<'a> PartialMsp<'a> {
    /// `real` is the number of elements that will actually arrive.
    pub fn new(inner: Box<dyn OnlineAlgorithm + 'a>, known: &[usize], real: usize, coins: TapeCoins) -> Self {
        let mut known = known.to_vec();
        known.sort_unstable();
        known.dedup();
        PartialMsp { inner, pending: known.clone(), known, remaining: real, coins }
    }

    fn pass_dummy(&mut self) {
        let i = self.coins.below(self.pending.len());
        let d = self.pending.swap_remove(i);
        self.inner.on_arrival(d, 0.0);
    }
}

impl OnlineAlgorithm for PartialMsp<'_> {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision {
        while !self.pending.is_empty() && self.coins.below(self.pending.len() + self.remaining) >= self.remaining {
            self.pass_dummy();
        }
        self.remaining = self.remaining.saturating_sub(1);
        self.inner.on_arrival(u, weight)
    }

    fn finish(mut self: Box<Self>) -> Vec<usize> {
        while !self.pending.is_empty() {
            self.pass_dummy();
        }
        let known = std::mem::take(&mut self.known);
        self.inner.finish().into_iter().filter(|u| known.binary_search(u).is_err()).collect()
    }
}
