use super::{ObjectiveError, ObjectiveOracle};
use crate::matroid::{MatroidError, MatroidOracle};

/// One iteration of the greedy loop: the element of largest marginal among
/// those not yet processed, its marginal with respect to the current
/// solution, and whether it can be added without breaking independence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreedyStep {
    pub element: usize,
    pub gain: f64,
    pub independent: bool,
}

/// Result of a greedy scan. `chosen[i]` was added with marginal `gains[i]`,
/// so `chosen[..i]` is the solution just before it was added.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GreedyRun {
    pub chosen: Vec<usize>,
    pub gains: Vec<f64>,
}

impl GreedyRun {
    /// Solution immediately before `u` was added, if it was.
    pub fn prefix_before(&self, u: usize) -> Option<&[usize]> {
        self.chosen.iter().position(|&x| x == u).map(|i| &self.chosen[..i])
    }
}

/// Generic greedy loop. Repeatedly removes the unprocessed candidate
/// maximizing `f(u | M)` (ties to the smallest id) and asks `take` whether
/// to add it to `M`. `take` also sees the current solution in insertion
/// order. Callers guarantee all candidates belong to both ground sets.
pub fn greedy_scan<F>(f: &ObjectiveOracle, m: &MatroidOracle, candidates: &[usize], mut take: F) -> GreedyRun
where
    F: FnMut(&GreedyStep, &[usize]) -> bool,
{
    let mut remaining = candidates.to_vec();
    remaining.sort_unstable();
    remaining.dedup();
    let mut run = GreedyRun::default();
    let mut sorted: Vec<usize> = Vec::new();
    let mut probe: Vec<usize> = Vec::new();
    while !remaining.is_empty() {
        let base = f.value(&sorted);
        let mut best = 0;
        let mut best_gain = f64::NEG_INFINITY;
        for (i, &u) in remaining.iter().enumerate() {
            probe.clear();
            probe.extend_from_slice(&sorted);
            let pos = probe.partition_point(|&x| x < u);
            probe.insert(pos, u);
            let gain = f.value(&probe) - base;
            if gain > best_gain {
                best = i;
                best_gain = gain;
            }
        }
        let u = remaining.remove(best);
        let step = GreedyStep { element: u, gain: best_gain, independent: m.can_extend(&sorted, u) };
        if take(&step, &run.chosen) {
            run.chosen.push(u);
            run.gains.push(best_gain);
            let pos = sorted.partition_point(|&x| x < u);
            sorted.insert(pos, u);
        }
    }
    run
}

/// The standard greedy: add `u` iff `M + u` is independent and
/// `f(u | M) >= 0`.
pub fn greedy_run(f: &ObjectiveOracle, m: &MatroidOracle, set: &[usize]) -> GreedyRun {
    greedy_scan(f, m, set, |step, _| step.independent && step.gain >= 0.0)
}

/// Greedy solution on `set`, in insertion order.
pub fn greedy(f: &ObjectiveOracle, m: &MatroidOracle, set: &[usize]) -> Result<Vec<usize>, ObjectiveError> {
    for &u in set {
        if !f.ground().contains(u) {
            return Err(ObjectiveError::UnknownElement(u));
        }
        if !m.ground().contains(u) {
            return Err(MatroidError::UnknownElement(u).into());
        }
    }
    Ok(greedy_run(f, m, set).chosen)
}

/// Maximum weight independent subset of `set` under non-negative linear
/// weights: scan by decreasing weight (ties to the smallest id) and keep
/// positive-weight elements that preserve independence.
pub fn max_weight_independent(m: &MatroidOracle, weights: &[f64], set: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = set.iter().copied().filter(|&u| weights.get(u).is_some_and(|&w| w > 0.0)).collect();
    order.sort_unstable_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    order.dedup();
    let mut chosen: Vec<usize> = Vec::new();
    for u in order {
        if m.can_extend(&chosen, u) {
            chosen.push(u);
        }
    }
    chosen.sort_unstable();
    chosen
}
