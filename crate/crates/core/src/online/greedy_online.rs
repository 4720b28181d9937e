use super::{Decision, OnlineAlgorithm, StreamSetup};
use crate::matroid::MatroidOracle;

/// Accepts every positive-weight element that keeps the solution
/// independent.
pub struct GreedyOnline<'a> {
    matroid: &'a MatroidOracle,
    chosen: Vec<usize>,
}

impl<'a> GreedyOnline<'a> {
    pub fn new(setup: StreamSetup<'a>) -> Self {
        GreedyOnline { matroid: setup.matroid, chosen: Vec::new() }
    }
}

impl OnlineAlgorithm for GreedyOnline<'_> {
    fn on_arrival(&mut self, u: usize, weight: f64) -> Decision {
        if weight > 0.0 && self.matroid.can_extend(&self.chosen, u) {
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
