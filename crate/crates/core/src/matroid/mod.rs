//! Matroid oracles.
//!
//! Matroids are described declaratively by a [`MatroidSpec`] and compiled
//! against a [`GroundSet`] into an immutable [`MatroidOracle`] answering
//! independence, rank and span queries exactly. Oracles hold no mutable
//! state; scratch space is allocated per query, so one oracle can be shared
//! by any number of threads.

mod axioms;
pub mod field;
pub mod matching;
pub mod union_find;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use axioms::{verify_axioms, AxiomReport, IndependenceOracle, EXHAUSTIVE_LIMIT};

use union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatroidError {
    #[error("element {0} is not in the ground set")]
    UnknownElement(usize),
    #[error("element {0} appears twice in the ground set")]
    DuplicateElement(usize),
    #[error("laminar family members {first:?} and {second:?} overlap without nesting")]
    NonLaminarFamily { first: Vec<usize>, second: Vec<usize> },
    #[error("partition classes do not partition the ground set: {0}")]
    ClassesNotPartition(String),
    #[error("column of element {element} has {nonzeros} non-zero entries, more than the sparsity bound {sparsity}")]
    SparsityViolated { element: usize, nonzeros: usize, sparsity: usize },
    #[error("edge of element {element} is invalid: {reason}")]
    InvalidEdge { element: usize, reason: String },
    #[error("no {what} given for element {element}")]
    MissingElementData { element: usize, what: &'static str },
    #[error("column of element {element} has length {len}, expected {expected}")]
    DimensionMismatch { element: usize, len: usize, expected: usize },
    #[error("ground set of size {n} exceeds the exhaustive limit {limit}")]
    GroundTooLarge { n: usize, limit: usize },
}

/// Ordered list of distinct element identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl GroundSet {
    /// The ground set `{0, .., n-1}`.
    pub fn dense(n: usize) -> Self {
        GroundSet { elements: (0..n).collect(), member: vec![true; n] }
    }

    pub fn new(elements: Vec<usize>) -> Result<Self, MatroidError> {
        let len = elements.iter().max().map_or(0, |&m| m + 1);
        let mut member = vec![false; len];
        for &e in &elements {
            if member[e] {
                return Err(MatroidError::DuplicateElement(e));
            }
            member[e] = true;
        }
        Ok(GroundSet { elements, member })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.member.get(e).copied().unwrap_or(false)
    }

    /// One past the largest identifier, i.e. the length of a lookup table
    /// indexed by element id.
    pub fn id_bound(&self) -> usize {
        self.member.len()
    }
}

/// A member of a laminar family together with its capacity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaminarSet {
    pub elements: Vec<usize>,
    pub capacity: usize,
}

/// Declarative matroid description. Per-element tables are indexed by
/// element id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidSpec {
    /// Every set of at most `k` elements is independent.
    Uniform { k: usize },
    /// At most `capacities[c]` elements of class `c`; capacities default to 1
    /// (unitary partition matroid).
    Partition {
        class_of: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        capacities: Option<Vec<usize>>,
    },
    /// Forests of a multigraph; element `e` is the edge `edges[e]`.
    Graphic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<usize>,
        edges: Vec<[usize; 2]>,
    },
    /// At most `capacity` elements from each member set.
    Laminar { family: Vec<LaminarSet> },
    /// Sets matchable into the right-hand vertices listed per element.
    Transversal { adjacency: Vec<Vec<usize>> },
    /// Linearly independent columns over GF(2^31 - 1), at most `sparsity`
    /// non-zeros per column.
    LinearSparse { sparsity: usize, columns: Vec<Vec<u64>> },
    /// `base` restricted to the elements in `keep`.
    Restriction { base: Box<MatroidSpec>, keep: Vec<usize> },
}

#[derive(Clone, Debug)]
enum Family {
    Uniform { k: usize },
    Partition { class_of: Vec<usize>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<[usize; 2]> },
    Laminar { sets: Vec<(Vec<usize>, usize)>, containing: Vec<Vec<usize>> },
    Transversal { adjacency: Vec<Vec<usize>>, right: usize },
    Linear { columns: Vec<Vec<u64>> },
    Restricted(Box<MatroidOracle>),
}

/// Compiled, immutable matroid.
#[derive(Clone, Debug)]
pub struct MatroidOracle {
    ground: GroundSet,
    spec: MatroidSpec,
    family: Family,
}

/// Compiles `spec` over `ground`, validating every structural precondition.
pub fn build_matroid(spec: MatroidSpec, ground: GroundSet) -> Result<MatroidOracle, MatroidError> {
    let family = match &spec {
        MatroidSpec::Uniform { k } => Family::Uniform { k: *k },
        MatroidSpec::Partition { class_of, capacities } => {
            let mut used = 0;
            for &e in ground.elements() {
                let c = *class_of.get(e).ok_or_else(|| {
                    MatroidError::ClassesNotPartition(format!("element {e} has no class"))
                })?;
                used = used.max(c + 1);
            }
            let capacities = match capacities {
                Some(caps) => {
                    if caps.len() < used {
                        return Err(MatroidError::ClassesNotPartition(format!(
                            "class {} has no capacity",
                            caps.len()
                        )));
                    }
                    caps.clone()
                }
                None => vec![1; used],
            };
            Family::Partition { class_of: class_of.clone(), capacities }
        }
        MatroidSpec::Graphic { vertices, edges } => {
            let mut needed = 0;
            for &e in ground.elements() {
                let [a, b] = *edges
                    .get(e)
                    .ok_or(MatroidError::MissingElementData { element: e, what: "edge" })?;
                needed = needed.max(a.max(b) + 1);
            }
            let vertices = match *vertices {
                Some(v) if v < needed => {
                    return Err(MatroidError::InvalidEdge {
                        element: ground
                            .elements()
                            .iter()
                            .copied()
                            .find(|&e| edges[e][0] >= v || edges[e][1] >= v)
                            .unwrap_or(0),
                        reason: format!("endpoint outside the {v} declared vertices"),
                    })
                }
                Some(v) => v,
                None => needed,
            };
            Family::Graphic { vertices, edges: edges.clone() }
        }
        MatroidSpec::Laminar { family } => {
            let mut sets: Vec<(Vec<usize>, usize)> = Vec::with_capacity(family.len());
            for member in family {
                let mut s = member.elements.clone();
                s.sort_unstable();
                s.dedup();
                if let Some(&bad) = s.iter().find(|&&e| !ground.contains(e)) {
                    return Err(MatroidError::UnknownElement(bad));
                }
                sets.push((s, member.capacity));
            }
            check_laminar(&sets)?;
            let mut containing = vec![Vec::new(); ground.id_bound()];
            for (i, (s, _)) in sets.iter().enumerate() {
                for &e in s {
                    containing[e].push(i);
                }
            }
            Family::Laminar { sets, containing }
        }
        MatroidSpec::Transversal { adjacency } => {
            let mut right = 0;
            for &e in ground.elements() {
                let adj = adjacency
                    .get(e)
                    .ok_or(MatroidError::MissingElementData { element: e, what: "adjacency list" })?;
                right = adj.iter().fold(right, |r, &v| r.max(v + 1));
            }
            Family::Transversal { adjacency: adjacency.clone(), right }
        }
        MatroidSpec::LinearSparse { sparsity, columns } => {
            let mut expected = None;
            let mut reduced = vec![Vec::new(); columns.len()];
            for &e in ground.elements() {
                let col = columns
                    .get(e)
                    .ok_or(MatroidError::MissingElementData { element: e, what: "column" })?;
                let rows = *expected.get_or_insert(col.len());
                if col.len() != rows {
                    return Err(MatroidError::DimensionMismatch { element: e, len: col.len(), expected: rows });
                }
                let col: Vec<u64> = col.iter().map(|&x| field::reduce(x)).collect();
                let nonzeros = col.iter().filter(|&&x| x != 0).count();
                if nonzeros > *sparsity {
                    return Err(MatroidError::SparsityViolated { element: e, nonzeros, sparsity: *sparsity });
                }
                reduced[e] = col;
            }
            Family::Linear { columns: reduced }
        }
        MatroidSpec::Restriction { base, keep } => {
            let base = build_matroid((**base).clone(), ground.clone())?;
            return restrict(&base, keep).map(|m| MatroidOracle { spec, ..m });
        }
    };
    Ok(MatroidOracle { ground, spec, family })
}

fn check_laminar(sets: &[(Vec<usize>, usize)]) -> Result<(), MatroidError> {
    for (i, (a, _)) in sets.iter().enumerate() {
        for (b, _) in &sets[i + 1..] {
            let common = a.iter().filter(|e| b.binary_search(e).is_ok()).count();
            if common != 0 && common != a.len() && common != b.len() {
                return Err(MatroidError::NonLaminarFamily { first: a.clone(), second: b.clone() });
            }
        }
    }
    Ok(())
}

/// Restriction of `m` to `keep`: independence is `I ∩ 2^keep`.
pub fn restrict(m: &MatroidOracle, keep: &[usize]) -> Result<MatroidOracle, MatroidError> {
    let mut kept = Vec::with_capacity(keep.len());
    for &e in keep {
        if !m.ground.contains(e) {
            return Err(MatroidError::UnknownElement(e));
        }
        if !kept.contains(&e) {
            kept.push(e);
        }
    }
    Ok(MatroidOracle {
        ground: GroundSet::new(kept.clone())?,
        spec: MatroidSpec::Restriction { base: Box::new(m.spec.clone()), keep: kept },
        family: Family::Restricted(Box::new(m.clone())),
    })
}

impl MatroidOracle {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn spec(&self) -> &MatroidSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    fn normalize(&self, set: &[usize]) -> Result<Vec<usize>, MatroidError> {
        let mut s = Vec::with_capacity(set.len());
        for &e in set {
            if !self.ground.contains(e) {
                return Err(MatroidError::UnknownElement(e));
            }
            s.push(e);
        }
        s.sort_unstable();
        s.dedup();
        Ok(s)
    }

    pub fn is_independent(&self, set: &[usize]) -> Result<bool, MatroidError> {
        let s = self.normalize(set)?;
        Ok(self.independent_sorted(&s))
    }

    /// Size of a largest independent subset of `set`.
    pub fn rank(&self, set: &[usize]) -> Result<usize, MatroidError> {
        let s = self.normalize(set)?;
        Ok(self.rank_sorted(&s))
    }

    /// `true` iff adding `u` to `set` does not increase the rank.
    pub fn is_spanned(&self, u: usize, set: &[usize]) -> Result<bool, MatroidError> {
        let s = self.normalize(set)?;
        if !self.ground.contains(u) {
            return Err(MatroidError::UnknownElement(u));
        }
        if s.binary_search(&u).is_ok() {
            return Ok(true);
        }
        let mut with = s.clone();
        with.push(u);
        with.sort_unstable();
        Ok(self.rank_sorted(&with) == self.rank_sorted(&s))
    }

    /// `set + u` independent, for a `set` already known to be independent.
    /// Skips validation; callers guarantee all elements are in the ground set.
    pub(crate) fn can_extend(&self, set: &[usize], u: usize) -> bool {
        let mut s: Vec<usize> = Vec::with_capacity(set.len() + 1);
        s.extend_from_slice(set);
        s.push(u);
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.independent_sorted(&s)
    }

    pub fn restrict(&self, keep: &[usize]) -> Result<MatroidOracle, MatroidError> {
        restrict(self, keep)
    }

    /// Class table of a unitary partition matroid (every class capacity 1),
    /// indexed by element id. Rank-one uniform matroids count as one class.
    pub fn unitary_classes(&self) -> Option<Vec<usize>> {
        match &self.family {
            Family::Partition { class_of, capacities } => {
                let all_unit = self
                    .ground
                    .elements()
                    .iter()
                    .all(|&e| capacities[class_of[e]] == 1);
                all_unit.then(|| class_of.clone())
            }
            Family::Uniform { k: 1 } => Some(vec![0; self.ground.id_bound()]),
            Family::Restricted(base) => base.unitary_classes(),
            _ => None,
        }
    }

    /// Rank of a uniform matroid, if this is one.
    pub fn uniform_rank(&self) -> Option<usize> {
        match &self.family {
            Family::Uniform { k } => Some(*k),
            _ => None,
        }
    }

    fn independent_sorted(&self, s: &[usize]) -> bool {
        match &self.family {
            Family::Uniform { k } => s.len() <= *k,
            Family::Partition { class_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                s.iter().all(|&e| {
                    let c = class_of[e];
                    used[c] += 1;
                    used[c] <= capacities[c]
                })
            }
            Family::Graphic { vertices, edges } => {
                let mut uf = UnionFind::new(*vertices);
                s.iter().all(|&e| uf.union(edges[e][0], edges[e][1]))
            }
            Family::Laminar { sets, containing } => {
                let mut used = vec![0usize; sets.len()];
                s.iter().all(|&e| {
                    containing[e].iter().all(|&i| {
                        used[i] += 1;
                        used[i] <= sets[i].1
                    })
                })
            }
            Family::Transversal { adjacency, right } => {
                let left: Vec<&[usize]> = s.iter().map(|&e| adjacency[e].as_slice()).collect();
                matching::saturates_left(&left, *right)
            }
            Family::Linear { columns } => field::rank(s.iter().map(|&e| columns[e].as_slice())) == s.len(),
            Family::Restricted(base) => base.independent_sorted(s),
        }
    }

    fn rank_sorted(&self, s: &[usize]) -> usize {
        match &self.family {
            Family::Uniform { k } => s.len().min(*k),
            Family::Partition { class_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                for &e in s {
                    used[class_of[e]] += 1;
                }
                used.iter().zip(capacities).map(|(&u, &c)| u.min(c)).sum()
            }
            Family::Graphic { vertices, edges } => {
                let mut uf = UnionFind::new(*vertices);
                s.iter().filter(|&&e| uf.union(edges[e][0], edges[e][1])).count()
            }
            Family::Laminar { sets, containing } => {
                // greedy extension is a maximum independent subset in any matroid
                let mut used = vec![0usize; sets.len()];
                s.iter()
                    .filter(|&&e| {
                        let fits = containing[e].iter().all(|&i| used[i] < sets[i].1);
                        if fits {
                            containing[e].iter().for_each(|&i| used[i] += 1);
                        }
                        fits
                    })
                    .count()
            }
            Family::Transversal { adjacency, right } => {
                let left: Vec<&[usize]> = s.iter().map(|&e| adjacency[e].as_slice()).collect();
                matching::max_matching(&left, *right)
            }
            Family::Linear { columns } => field::rank(s.iter().map(|&e| columns[e].as_slice())),
            Family::Restricted(base) => base.rank_sorted(s),
        }
    }
}

impl IndependenceOracle for MatroidOracle {
    fn ground_elements(&self) -> &[usize] {
        self.ground.elements()
    }

    fn independent(&self, set: &[usize]) -> Result<bool, MatroidError> {
        self.is_independent(set)
    }
}
