use super::{ObjectiveError, ObjectiveOracle};
use crate::matroid::MatroidOracle;

/// Largest ground set accepted by [`offline_opt`].
pub const OFFLINE_LIMIT: usize = 20;

/// Exact maximizer of `f` over the independent sets, found by depth-first
/// enumeration of independent sets in increasing id order. Ties keep the
/// first set found.
pub fn offline_opt(f: &ObjectiveOracle, m: &MatroidOracle) -> Result<(Vec<usize>, f64), ObjectiveError> {
    let ground: Vec<usize> = m.ground().elements().to_vec();
    if ground.len() > OFFLINE_LIMIT {
        return Err(ObjectiveError::GroundTooLargeForExactOpt { n: ground.len(), limit: OFFLINE_LIMIT });
    }
    if let Some(&bad) = ground.iter().find(|&&u| !f.ground().contains(u)) {
        return Err(ObjectiveError::UnknownElement(bad));
    }
    let mut sorted = ground;
    sorted.sort_unstable();
    let mut best = (Vec::new(), f.value(&[]));
    let mut current = Vec::new();
    extend(f, m, &sorted, 0, &mut current, &mut best);
    Ok(best)
}

fn extend(
    f: &ObjectiveOracle,
    m: &MatroidOracle,
    ground: &[usize],
    from: usize,
    current: &mut Vec<usize>,
    best: &mut (Vec<usize>, f64),
) {
    for i in from..ground.len() {
        let u = ground[i];
        if !m.can_extend(current, u) {
            continue;
        }
        current.push(u);
        let v = f.value(current);
        if v > best.1 {
            *best = (current.clone(), v);
        }
        extend(f, m, ground, i + 1, current, best);
        current.pop();
    }
}
