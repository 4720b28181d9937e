//! Brute-force oracles shared by the integration tests. They only use the
//! public value and independence oracles, never the library's own search
//! routines.

#![allow(dead_code)]

use smsp::{Instance, WeightVector};

pub fn subsets(set: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..1usize << set.len()).map(move |mask| (0..set.len()).filter(|i| mask >> i & 1 == 1).map(|i| set[i]).collect())
}

pub fn value(inst: &Instance, set: &[usize]) -> f64 {
    let mut s = set.to_vec();
    s.sort_unstable();
    inst.objective.evaluate(&s).unwrap()
}

pub fn independent(inst: &Instance, set: &[usize]) -> bool {
    let mut s = set.to_vec();
    s.sort_unstable();
    inst.matroid.is_independent(&s).unwrap()
}

/// `min over A ⊆ S of f(A) + w(S \ A)`.
pub fn convolution(inst: &Instance, w: &WeightVector, set: &[usize]) -> f64 {
    let total: f64 = set.iter().map(|&u| w.get(u)).sum();
    subsets(set)
        .map(|a| value(inst, &a) + total - a.iter().map(|&u| w.get(u)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Largest `w`-weight of an independent subset of `set`.
pub fn best_weight(inst: &Instance, w: &WeightVector, set: &[usize]) -> f64 {
    subsets(set)
        .filter(|s| independent(inst, s))
        .map(|s| s.iter().map(|&u| w.get(u)).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `max f(S)` over independent `S`.
pub fn optimum(inst: &Instance) -> f64 {
    subsets(inst.elements()).filter(|s| independent(inst, s)).map(|s| value(inst, &s)).fold(f64::NEG_INFINITY, f64::max)
}

/// Direct check of the three matroid axioms on the subsets of `ground`.
pub fn is_matroid(inst: &Instance, ground: &[usize]) -> bool {
    let family: Vec<Vec<usize>> = subsets(ground).filter(|s| independent(inst, s)).collect();
    let member = |s: &[usize]| family.iter().any(|f| f == s);
    if !member(&[]) {
        return false;
    }
    for s in &family {
        for i in 0..s.len() {
            let mut t = s.clone();
            t.remove(i);
            if !member(&t) {
                return false;
            }
        }
    }
    for a in &family {
        for b in family.iter().filter(|b| b.len() > a.len()) {
            let extends = b.iter().filter(|u| !a.contains(u)).any(|&u| {
                let mut t = a.clone();
                t.push(u);
                t.sort_unstable();
                member(&t)
            });
            if !extends {
                return false;
            }
        }
    }
    true
}

pub struct Stat {
    pub mean: f64,
    pub se: f64,
}

pub fn stat(xs: &[f64]) -> Stat {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Stat { mean, se: (var / n).sqrt() }
}
