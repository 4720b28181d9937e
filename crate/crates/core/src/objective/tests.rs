use super::*;
use crate::matroid::{build_matroid, GroundSet, MatroidSpec};
use proptest::prelude::*;

fn ground(n: usize) -> GroundSet {
    GroundSet::dense(n)
}

fn obj(spec: ObjectiveSpec, n: usize) -> ObjectiveOracle {
    build_objective(spec, &ground(n)).unwrap()
}

fn uniform(k: usize, n: usize) -> MatroidOracle {
    build_matroid(MatroidSpec::Uniform { k }, ground(n)).unwrap()
}

fn coverage_abc() -> ObjectiveOracle {
    // a=0, b=1, c=2, d=3
    obj(ObjectiveSpec::Coverage { covers: vec![vec![0, 1], vec![1, 2], vec![3]], item_weights: None }, 3)
}

fn masks(elements: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..1usize << elements.len())
        .map(move |m| (0..elements.len()).filter(|i| m >> i & 1 == 1).map(|i| elements[i]).collect())
}

/// Independent oracle for the convolution: f_w(S) = min(f(S), min_u f_w(S-u) + w(u)).
fn fw_by_recursion(f: &ObjectiveOracle, w: &WeightVector, n: usize) -> Vec<f64> {
    let mut table = vec![0.0; 1 << n];
    for mask in 0..1usize << n {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut best = f.evaluate(&s).unwrap();
        for &u in &s {
            best = best.min(table[mask & !(1 << u)] + w.get(u));
        }
        table[mask] = best;
    }
    table
}

#[test]
fn evaluate_examples() {
    let lin = obj(ObjectiveSpec::Linear { weights: vec![2.0, 3.0] }, 2);
    assert_eq!(lin.evaluate(&[0, 1]).unwrap(), 5.0);
    let max = obj(ObjectiveSpec::MaxWeight { weights: vec![2.0, 3.0] }, 2);
    assert_eq!(max.evaluate(&[0, 1]).unwrap(), 3.0);
    assert_eq!(max.evaluate(&[]).unwrap(), 0.0);
    let cov = obj(ObjectiveSpec::Coverage { covers: vec![vec![0, 1], vec![1, 2]], item_weights: None }, 2);
    assert_eq!(cov.evaluate(&[0, 1]).unwrap(), 3.0);
    assert_eq!(cov.evaluate(&[5]), Err(ObjectiveError::UnknownElement(5)));
}

#[test]
fn evaluate_ignores_listing_order() {
    let lin = obj(ObjectiveSpec::Linear { weights: vec![0.1, 0.2, 0.3, 1e-17] }, 4);
    let a = lin.evaluate(&[3, 2, 1, 0]).unwrap();
    let b = lin.evaluate(&[0, 1, 2, 3]).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn call_counter_counts_queries() {
    let lin = obj(ObjectiveSpec::Linear { weights: vec![1.0, 1.0] }, 2);
    assert_eq!(lin.call_count(), 0);
    lin.evaluate(&[0]).unwrap();
    lin.marginal(1, &[0]).unwrap();
    assert_eq!(lin.call_count(), 3);
}

#[test]
fn other_families_evaluate() {
    let wr = obj(
        ObjectiveSpec::WeightedRank {
            matroid: MatroidSpec::Partition { class_of: vec![0, 0, 1], capacities: None },
            weights: vec![4.0, 6.0, 1.0],
        },
        3,
    );
    assert_eq!(wr.evaluate(&[0, 1, 2]).unwrap(), 7.0);
    assert_eq!(wr.evaluate(&[0, 2]).unwrap(), 5.0);
    let cut = obj(ObjectiveSpec::Cut { edges: vec![(0, 1, 2.0), (1, 2, 3.0)] }, 3);
    assert_eq!(cut.evaluate(&[1]).unwrap(), 5.0);
    assert_eq!(cut.evaluate(&[0, 1, 2]).unwrap(), 0.0);
    assert!(!cut.is_monotone());
    let shifted = obj(
        ObjectiveSpec::Shifted { base: Box::new(ObjectiveSpec::Linear { weights: vec![1.0] }), offset: 2.5 },
        1,
    );
    assert_eq!(shifted.evaluate(&[]).unwrap(), 2.5);
    assert!(shifted.is_monotone());
    let table = obj(ObjectiveSpec::Table { values: vec![0.0, 1.0, 2.0, 4.0] }, 2);
    assert_eq!(table.evaluate(&[0, 1]).unwrap(), 4.0);
}

#[test]
fn invalid_specs_rejected() {
    let g = ground(2);
    assert!(matches!(
        build_objective(ObjectiveSpec::Linear { weights: vec![1.0, -1.0] }, &g),
        Err(ObjectiveError::InvalidSpec(_))
    ));
    assert!(matches!(
        build_objective(ObjectiveSpec::Linear { weights: vec![1.0] }, &g),
        Err(ObjectiveError::InvalidSpec(_))
    ));
    assert!(matches!(
        build_objective(ObjectiveSpec::Table { values: vec![0.0; 3] }, &g),
        Err(ObjectiveError::InvalidSpec(_))
    ));
    assert!(matches!(
        build_objective(ObjectiveSpec::Cut { edges: vec![(0, 4, 1.0)] }, &g),
        Err(ObjectiveError::InvalidSpec(_))
    ));
}

#[test]
fn marginal_examples() {
    let lin = obj(ObjectiveSpec::Linear { weights: vec![1.0, 7.0] }, 2);
    assert_eq!(lin.marginal(1, &[0]).unwrap(), 7.0);
    let max = obj(ObjectiveSpec::MaxWeight { weights: vec![5.0, 3.0] }, 2);
    assert_eq!(max.marginal(1, &[0]).unwrap(), 0.0);
    let dup = obj(ObjectiveSpec::Coverage { covers: vec![vec![0], vec![0]], item_weights: None }, 2);
    assert_eq!(dup.marginal(1, &[0]).unwrap(), 0.0);
    assert_eq!(dup.marginal(0, &[0]), Err(ObjectiveError::ElementAlreadyInSet(0)));
    let cut = obj(ObjectiveSpec::Cut { edges: vec![(0, 1, 2.0)] }, 2);
    assert_eq!(cut.marginal(1, &[0]).unwrap(), -2.0);
}

#[test]
fn weight_vector_clamps() {
    let mut w = WeightVector::from_values([1.0, -2.0, f64::NAN]);
    assert_eq!(w.as_slice(), &[1.0, 0.0, 0.0]);
    w.set(5, -1.0);
    w.set(4, 3.0);
    assert_eq!(w.get(5), 0.0);
    assert_eq!(w.get(40), 0.0);
    assert_eq!(w.sum(&[0, 4, 4]), 4.0);
}

#[test]
fn convolution_examples() {
    let shifted = obj(
        ObjectiveSpec::Shifted { base: Box::new(ObjectiveSpec::Linear { weights: vec![1.0, 2.0] }), offset: 3.0 },
        2,
    );
    let w = WeightVector::from_values([0.5, 0.5]);
    assert_eq!(convolve_fw(&shifted, &w, &[]).unwrap(), 3.0);

    let weights = vec![1.5, 2.0, 0.25, 4.0];
    let lin = obj(ObjectiveSpec::Linear { weights: weights.clone() }, 4);
    let w = WeightVector::from_values(weights);
    for s in masks(&[0, 1, 2, 3]) {
        assert!((convolve_fw(&lin, &w, &s).unwrap() - w.sum(&s)).abs() < 1e-12);
    }
}

#[test]
fn convolution_of_max_weight_matches_enumeration() {
    // A = {}: 9, {0}: 5 + 4, {1}: 4 + 5, {0,1}: 5
    let f = obj(ObjectiveSpec::MaxWeight { weights: vec![5.0, 4.0] }, 2);
    let w = WeightVector::from_values([5.0, 4.0]);
    assert_eq!(convolve_fw(&f, &w, &[0, 1]).unwrap(), 5.0);
    assert_eq!(fw_by_recursion(&f, &w, 2)[0b11], 5.0);
}

#[test]
fn convolution_size_limit() {
    let f = obj(ObjectiveSpec::Linear { weights: vec![1.0; 21] }, 21);
    let w = WeightVector::zeros(21);
    let all: Vec<usize> = (0..21).collect();
    assert_eq!(
        convolve_fw(&f, &w, &all),
        Err(ObjectiveError::SetTooLargeForExactConvolution { size: 21, limit: 20 })
    );
}

#[test]
fn greedy_coverage_example() {
    let f = coverage_abc();
    let m = uniform(2, 3);
    let run = greedy_run(&f, &m, &[0, 1, 2]);
    assert_eq!(run.chosen, vec![0, 1]);
    assert_eq!(run.gains, vec![2.0, 1.0]);
    assert_eq!(run.prefix_before(1), Some(&[0usize][..]));
    assert_eq!(greedy(&f, &m, &[]).unwrap(), Vec::<usize>::new());
    // every independent C: f(S) >= f(C ∪ S) / 2
    let fs = f.evaluate(&run.chosen).unwrap();
    for c in masks(&[0, 1, 2]).filter(|c| c.len() <= 2) {
        let mut u = c.clone();
        u.extend(&run.chosen);
        assert!(fs >= f.evaluate(&u).unwrap() / 2.0);
    }
}

#[test]
fn greedy_stops_at_negative_marginals() {
    // f(∅) = 3, every non-empty set is worth less
    let f = obj(ObjectiveSpec::Table { values: vec![3.0, 1.0, 1.0, 0.5] }, 2);
    assert!(greedy(&f, &uniform(2, 2), &[0, 1]).unwrap().is_empty());
}

#[test]
fn greedy_accepts_zero_marginals() {
    let f = obj(ObjectiveSpec::Linear { weights: vec![0.0, 1.0] }, 2);
    assert_eq!(greedy(&f, &uniform(2, 2), &[0, 1]).unwrap(), vec![1, 0]);
}

#[test]
fn greedy_rejects_unknown_elements() {
    let f = coverage_abc();
    assert!(greedy(&f, &uniform(2, 3), &[7]).is_err());
}

#[test]
fn offline_examples() {
    let f = obj(ObjectiveSpec::Shifted { base: Box::new(ObjectiveSpec::Linear { weights: vec![] }), offset: 1.0 }, 0);
    let m = uniform(1, 0);
    assert_eq!(offline_opt(&f, &m).unwrap(), (vec![], 1.0));
    let f = obj(ObjectiveSpec::Linear { weights: vec![5.0, 3.0, 1.0] }, 3);
    assert_eq!(offline_opt(&f, &uniform(2, 3)).unwrap(), (vec![0, 1], 8.0));
    assert_eq!(offline_opt(&coverage_abc(), &uniform(2, 3)).unwrap().1, 3.0);
    let big = obj(ObjectiveSpec::Linear { weights: vec![1.0; 21] }, 21);
    assert_eq!(
        offline_opt(&big, &uniform(2, 21)),
        Err(ObjectiveError::GroundTooLargeForExactOpt { n: 21, limit: 20 })
    );
}

#[test]
fn check_submodular_examples() {
    let lin = obj(ObjectiveSpec::Linear { weights: vec![1.0, 2.0, 3.0, 0.5, 0.0, 9.0] }, 6);
    let r = check_submodular(&lin).unwrap();
    assert!(r.passed() && r.modular && r.monotone);

    let n = 4;
    let squares: Vec<f64> = (0..1usize << n).map(|m| (m.count_ones() as f64).powi(2)).collect();
    let sq = obj(ObjectiveSpec::Table { values: squares }, n);
    let r = check_submodular(&sq).unwrap();
    let v = r.violation.clone().expect("supermodular function must fail");
    assert_eq!((v.a, v.b, v.e), (vec![], vec![0], 1));
    assert!(r.max_gap >= 2.0 - 1e-12);

    let neg = obj(ObjectiveSpec::Table { values: vec![0.0, -1.0] }, 1);
    assert_eq!(check_submodular(&neg).unwrap().negative, Some((vec![0], -1.0)));

    let big = obj(ObjectiveSpec::Linear { weights: vec![1.0; 11] }, 11);
    assert_eq!(check_submodular(&big), Err(ObjectiveError::GroundTooLarge { n: 11, limit: 10 }));
}

#[test]
fn builtin_families_are_submodular() {
    let specs = vec![
        ObjectiveSpec::Linear { weights: vec![1.0, 2.0, 3.0, 0.5, 0.0, 9.0] },
        ObjectiveSpec::Coverage {
            covers: vec![vec![0, 1], vec![1, 2], vec![3], vec![0, 3, 4], vec![], vec![5, 1]],
            item_weights: Some(vec![1.0, 0.5, 2.0, 1.0, 3.0, 0.25]),
        },
        ObjectiveSpec::MaxWeight { weights: vec![1.0, 2.0, 3.0, 0.5, 0.0, 9.0] },
        ObjectiveSpec::WeightedRank {
            matroid: MatroidSpec::Graphic {
                vertices: None,
                edges: vec![[0, 1], [1, 2], [0, 2], [2, 3], [3, 0], [1, 3]],
            },
            weights: vec![1.0, 2.0, 3.0, 0.5, 0.0, 9.0],
        },
        ObjectiveSpec::Cut { edges: vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 4, 1.0), (4, 5, 3.0), (5, 0, 1.0)] },
        ObjectiveSpec::Shifted { base: Box::new(ObjectiveSpec::MaxWeight { weights: vec![1.0; 6] }), offset: 2.0 },
    ];
    for spec in specs {
        let f = obj(spec.clone(), 6);
        let r = check_submodular(&f).unwrap();
        assert!(r.passed(), "{spec:?}: {r:?}");
        if f.is_monotone() {
            assert!(r.monotone, "{spec:?}");
        }
    }
}

#[test]
fn max_weight_independent_matches_enumeration() {
    let m = build_matroid(
        MatroidSpec::Graphic { vertices: None, edges: vec![[0, 1], [1, 2], [0, 2], [2, 3], [3, 0], [1, 3]] },
        ground(6),
    )
    .unwrap();
    let weights = [3.0, 1.0, 2.0, 2.0, 0.0, 5.0];
    let all: Vec<usize> = (0..6).collect();
    let got = max_weight_independent(&m, &weights, &all);
    let best = masks(&all)
        .filter(|s| m.is_independent(s).unwrap())
        .map(|s| s.iter().map(|&u| weights[u]).sum::<f64>())
        .fold(0.0, f64::max);
    assert!(m.is_independent(&got).unwrap());
    assert_eq!(got.iter().map(|&u| weights[u]).sum::<f64>(), best);
}

// --- properties on random instances -------------------------------------------

fn random_objective(n: usize) -> impl Strategy<Value = ObjectiveSpec> {
    let weights = proptest::collection::vec(0.0f64..5.0, n);
    prop_oneof![
        weights.clone().prop_map(|weights| ObjectiveSpec::Linear { weights }),
        weights.clone().prop_map(|weights| ObjectiveSpec::MaxWeight { weights }),
        proptest::collection::vec(proptest::collection::vec(0usize..8, 0..4), n)
            .prop_map(|covers| ObjectiveSpec::Coverage { covers, item_weights: None }),
        proptest::collection::vec((0..n, 0..n, 0.0f64..3.0), 0..2 * n).prop_map(|edges| ObjectiveSpec::Cut { edges }),
        (weights, 0.0f64..3.0).prop_map(|(weights, offset)| ObjectiveSpec::Shifted {
            base: Box::new(ObjectiveSpec::Coverage {
                covers: (0..weights.len()).map(|i| vec![i % 3, i]).collect(),
                item_weights: Some((0..weights.len().max(3)).map(|i| weights.get(i).copied().unwrap_or(1.0)).collect()),
            }),
            offset,
        }),
    ]
}

const N: usize = 7;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn convolution_properties(spec in random_objective(N), w in proptest::collection::vec(0.0f64..4.0, N)) {
        let f = obj(spec, N);
        let w = WeightVector::from_values(w);
        let all: Vec<usize> = (0..N).collect();
        let reference = fw_by_recursion(&f, &w, N);
        let mut fw = vec![0.0; 1 << N];
        for (mask, s) in masks(&all).enumerate() {
            fw[mask] = convolve_fw(&f, &w, &s).unwrap();
            prop_assert!((fw[mask] - reference[mask]).abs() < 1e-9);
            // f >= f_w, equality on the empty set
            prop_assert!(f.evaluate(&s).unwrap() >= fw[mask] - 1e-9);
        }
        prop_assert!((fw[0] - f.evaluate(&[]).unwrap()).abs() < 1e-12);
        // f_w is non-negative and submodular, monotone when f is
        let r = check_set_function(&all, &fw);
        prop_assert!(r.passed(), "{:?}", r);
        if f.is_monotone() {
            prop_assert!(r.monotone);
        }
        // w(S) - f_w(S) is monotone
        let gap: Vec<f64> = masks(&all).enumerate().map(|(m, s)| w.sum(&s) - fw[m]).collect();
        for mask in 0..1usize << N {
            for u in 0..N {
                prop_assert!(gap[mask | 1 << u] >= gap[mask] - 1e-9);
            }
        }
    }

    #[test]
    fn greedy_half_of_any_independent_union(spec in random_objective(N), k in 1usize..4) {
        let f = obj(spec, N);
        let m = uniform(k, N);
        let all: Vec<usize> = (0..N).collect();
        let s = greedy(&f, &m, &all).unwrap();
        prop_assert!(m.is_independent(&s).unwrap());
        let fs = f.evaluate(&s).unwrap();
        for c in masks(&all).filter(|c| c.len() <= k) {
            let mut u = c.clone();
            u.extend(&s);
            prop_assert!(fs >= f.evaluate(&u).unwrap() / 2.0 - 1e-9);
        }
    }

    #[test]
    fn union_subadditivity(spec in random_objective(N), parts in proptest::collection::vec(proptest::collection::vec(0..N, 0..5), 1..5)) {
        let f = obj(spec, N);
        let total: f64 = parts.iter().map(|p| f.evaluate(p).unwrap()).sum();
        let union: Vec<usize> = parts.concat();
        prop_assert!(total >= f.evaluate(&union).unwrap() - 1e-9);
    }

    #[test]
    fn offline_opt_dominates_every_independent_set(spec in random_objective(N), k in 1usize..4) {
        let f = obj(spec, N);
        let m = uniform(k, N);
        let (best, value) = offline_opt(&f, &m).unwrap();
        prop_assert!(m.is_independent(&best).unwrap());
        prop_assert_eq!(f.evaluate(&best).unwrap(), value);
        let all: Vec<usize> = (0..N).collect();
        for s in masks(&all).filter(|s| s.len() <= k) {
            prop_assert!(f.evaluate(&s).unwrap() <= value + 1e-12);
        }
    }
}
