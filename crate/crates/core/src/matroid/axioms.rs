//! Exhaustive verification of the matroid axioms on small ground sets.

use serde::Serialize;

use super::MatroidError;

/// Largest ground set [`verify_axioms`] will enumerate.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Anything that can answer independence queries over a finite ground set.
pub trait IndependenceOracle {
    fn ground_elements(&self) -> &[usize];
    fn independent(&self, set: &[usize]) -> Result<bool, MatroidError>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ground_size: usize,
    pub independent_sets: usize,
    pub empty_independent: bool,
    /// Smallest dependent set that has an independent one-element extension.
    pub downward_closure_counterexample: Option<Vec<usize>>,
    /// Independent `(I, J)` with `|I| > |J|` such that no `e ∈ I \ J` keeps
    /// `J + e` independent.
    pub exchange_counterexample: Option<(Vec<usize>, Vec<usize>)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.empty_independent
            && self.downward_closure_counterexample.is_none()
            && self.exchange_counterexample.is_none()
    }
}

/// Checks `∅ ∈ I`, downward closure, and the exchange axiom by enumerating
/// every subset of the ground set.
///
/// Exchange is checked in its equivalent form "all maximal independent
/// subsets of any `X` have the same size"; a violation at `X` with a
/// short maximal `J` yields the pair `(I, J)` with `I ⊆ X` independent and
/// `|I| > |J|`, `I` being the first such set in bitmask order.
pub fn verify_axioms<O: IndependenceOracle + ?Sized>(oracle: &O) -> Result<AxiomReport, MatroidError> {
    let ground = oracle.ground_elements();
    let n = ground.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(MatroidError::GroundTooLarge { n, limit: EXHAUSTIVE_LIMIT });
    }
    let full = 1usize << n;
    let to_set = |mask: usize| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ground[i]).collect() };

    let mut indep = vec![false; full];
    for (mask, slot) in indep.iter_mut().enumerate() {
        *slot = oracle.independent(&to_set(mask))?;
    }
    let independent_sets = indep.iter().filter(|&&b| b).count();

    let downward_closure_counterexample = (0..full)
        .find(|&t| !indep[t] && (0..n).any(|e| t >> e & 1 == 0 && indep[t | 1 << e]))
        .map(to_set);

    // rank[x] = size of a largest independent subset of x
    let mut rank = vec![0u32; full];
    for x in 1..full {
        rank[x] = if indep[x] {
            x.count_ones()
        } else {
            (0..n).filter(|e| x >> e & 1 == 1).map(|e| rank[x & !(1 << e)]).max().unwrap_or(0)
        };
    }

    let mut exchange_counterexample = None;
    #[allow(clippy::needless_range_loop)]
    'outer: for x in 1..full {
        // enumerate submasks j of x in increasing order
        let mut j = 0usize;
        loop {
            if indep[j] && (j.count_ones()) < rank[x] {
                let maximal = (0..n).all(|e| x >> e & 1 == 0 || j >> e & 1 == 1 || !indep[j | 1 << e]);
                if maximal {
                    let want = j.count_ones() + 1;
                    let i = submasks_ascending(x)
                        .find(|&i| indep[i] && i.count_ones() >= want)
                        .expect("rank guarantees a larger independent subset");
                    exchange_counterexample = Some((to_set(i), to_set(j)));
                    break 'outer;
                }
            }
            if j == x {
                break;
            }
            j = (j.wrapping_sub(x)) & x; // next submask in increasing order
        }
    }

    Ok(AxiomReport {
        ground_size: n,
        independent_sets,
        empty_independent: indep[0],
        downward_closure_counterexample,
        exchange_counterexample,
    })
}

fn submasks_ascending(x: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(0usize);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == x { None } else { Some(cur.wrapping_sub(x) & x) };
        Some(cur)
    })
}
