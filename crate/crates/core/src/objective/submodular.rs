use serde::Serialize;

use super::{ObjectiveError, ObjectiveOracle};
use crate::VALUE_TOLERANCE;

/// Largest ground set accepted by [`check_submodular`].
pub const SUBMODULAR_LIMIT: usize = 10;

/// A diminishing-returns violation: `f(e | A) < f(e | B)` with `A ⊆ B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub e: usize,
    /// `f(e | B) - f(e | A)`, positive.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubmodularReport {
    pub ground_size: usize,
    /// First set (in bitmask order) with a negative value.
    pub negative: Option<(Vec<usize>, f64)>,
    /// First violating triple, scanning `S` in bitmask order.
    pub violation: Option<Violation>,
    /// Largest violation gap seen (0 when none).
    pub max_gap: f64,
    /// Every diminishing-returns inequality holds with equality.
    pub modular: bool,
    /// `f(S) <= f(S + u)` everywhere.
    pub monotone: bool,
}

impl SubmodularReport {
    pub fn passed(&self) -> bool {
        self.negative.is_none() && self.violation.is_none()
    }
}

/// Checks a set function given by its value on every bitmask over
/// `elements`. Diminishing returns is checked in the equivalent local form
/// `f(S + a) + f(S + b) >= f(S) + f(S + a + b)`, which implies the general
/// statement for all `A ⊆ B`.
pub fn check_set_function(elements: &[usize], values: &[f64]) -> SubmodularReport {
    let n = elements.len();
    assert_eq!(values.len(), 1 << n, "one value per subset");
    let ids = |mask: usize| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elements[i]).collect() };
    let negative = values.iter().position(|&v| v < -VALUE_TOLERANCE).map(|m| (ids(m), values[m]));
    let mut violation = None;
    let mut max_gap = 0.0f64;
    let mut modular = true;
    let mut monotone = true;
    for s in 0..1usize << n {
        for a in 0..n {
            if s >> a & 1 == 1 {
                continue;
            }
            let sa = s | 1 << a;
            if values[sa] < values[s] - VALUE_TOLERANCE {
                monotone = false;
            }
            for b in a + 1..n {
                if s >> b & 1 == 1 {
                    continue;
                }
                let sb = s | 1 << b;
                let gap = (values[sa | 1 << b] - values[sa]) - (values[sb] - values[s]);
                if gap.abs() > VALUE_TOLERANCE {
                    modular = false;
                }
                if gap > VALUE_TOLERANCE {
                    max_gap = max_gap.max(gap);
                    if violation.is_none() {
                        violation = Some(Violation { a: ids(s), b: ids(sa), e: elements[b], gap });
                    }
                }
            }
        }
    }
    SubmodularReport { ground_size: n, negative, violation, max_gap, modular, monotone }
}

/// Exhaustive check of non-negativity and submodularity of `f`.
pub fn check_submodular(f: &ObjectiveOracle) -> Result<SubmodularReport, ObjectiveError> {
    let elements = f.ground().elements().to_vec();
    let n = elements.len();
    if n > SUBMODULAR_LIMIT {
        return Err(ObjectiveError::GroundTooLarge { n, limit: SUBMODULAR_LIMIT });
    }
    let values: Vec<f64> = (0..1usize << n)
        .map(|mask| {
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elements[i]).collect();
            f.value(&s)
        })
        .collect();
    Ok(check_set_function(&elements, &values))
}
