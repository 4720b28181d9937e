use super::*;
use crate::instance::Instance;
use crate::matroid::{build_matroid, GroundSet, MatroidSpec};
use crate::objective::{build_objective, convolve_fw, ObjectiveSpec};
use crate::online::LinearKey;
use crate::tape::{Draw, RandomTape, Stream};
use proptest::prelude::*;
use std::f64::consts::E;

fn instance(matroid: MatroidSpec, objective: ObjectiveSpec, n: usize) -> Instance {
    let g = GroundSet::dense(n);
    Instance::new("test", build_matroid(matroid, g.clone()).unwrap(), build_objective(objective, &g).unwrap()).unwrap()
}

fn single(weight: f64) -> Instance {
    instance(MatroidSpec::Uniform { k: 1 }, ObjectiveSpec::Linear { weights: vec![weight] }, 1)
}

fn coverage3() -> Instance {
    instance(
        MatroidSpec::Uniform { k: 2 },
        ObjectiveSpec::Coverage { covers: vec![vec![0, 1], vec![1, 2], vec![3]], item_weights: None },
        3,
    )
}

fn nonmono(p: f64) -> ReductionConfig {
    ReductionConfig::new(p, Variant::Nonmonotone, 1.0, None, None).unwrap()
}

fn mono(p: f64) -> ReductionConfig {
    ReductionConfig::new(p, Variant::Monotone, 1.0, None, None).unwrap()
}

const GREEDY: LinearKey = LinearKey::GreedyOnline;

#[test]
fn config_validation() {
    for p in [0.0, 1.0, -0.5, f64::NAN] {
        assert!(matches!(ReductionConfig::new(p, Variant::Nonmonotone, 1.0, None, None), Err(ReductionError::InvalidConfig(_))));
    }
    assert!(ReductionConfig::new(0.5, Variant::Nonmonotone, 0.5, None, None).is_err());
    assert!(matches!(
        ReductionConfig::new(0.5, Variant::Nonmonotone, 4.0, Some(0.1), None),
        Err(ReductionError::QBelowInverseAlpha { .. })
    ));
    assert!(ReductionConfig::new(0.5, Variant::Nonmonotone, E, Some(1.0 / E), None).is_ok());
    assert!(ReductionConfig::new(0.5, Variant::Nonmonotone, 2.0, None, Some(0)).is_err());
    let auto = ReductionConfig::auto(Variant::Nonmonotone, 1.0, None, None, false).unwrap();
    assert!((auto.p - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!("monotone".parse::<Variant>().unwrap(), Variant::Monotone);
    assert!("both".parse::<Variant>().is_err());
}

#[test]
fn online_on_empty_ground() {
    let inst = instance(MatroidSpec::Uniform { k: 1 }, ObjectiveSpec::Linear { weights: vec![] }, 0);
    for algorithm in [Algorithm::Online, Algorithm::Simulated] {
        let log = run(algorithm, &nonmono(0.5), &inst, &GREEDY, &RandomTape::new(3)).unwrap();
        assert!(log.output.is_empty());
        assert_eq!(log.f_output, 0.0);
    }
    let shifted = instance(
        MatroidSpec::Uniform { k: 1 },
        ObjectiveSpec::Shifted { base: Box::new(ObjectiveSpec::Linear { weights: vec![] }), offset: 2.0 },
        0,
    );
    let log = smsp_online(&nonmono(0.5), &shifted, &GREEDY, &RandomTape::new(3)).unwrap();
    assert_eq!(log.f_output, 2.0);
}

#[test]
fn online_single_element_in_learning_phase() {
    let tape = RandomTape::new(0).with_script(Stream::Learning, [Draw::Count(1)]);
    let log = smsp_online(&nonmono(0.5), &single(4.0), &GREEDY, &tape).unwrap();
    assert_eq!(log.learning, vec![0]);
    assert_eq!(log.greedy, vec![0]);
    assert!(log.candidates.is_empty());
    assert!(log.output.is_empty());
}

#[test]
fn online_single_element_selected() {
    let tape = RandomTape::new(0)
        .with_script(Stream::Learning, [Draw::Count(0)])
        .with_script(Stream::Membership, [Draw::Flip(true)]);
    let log = smsp_online(&nonmono(0.5), &single(4.0), &GREEDY, &tape).unwrap();
    assert!(log.greedy.is_empty());
    assert_eq!(log.candidates, vec![0]);
    assert_eq!(log.weights.get(0), 4.0);
    assert_eq!(log.output, vec![0]);
    assert_eq!(log.f_output, 4.0);
}

#[test]
fn online_single_element_coin_fails() {
    let tape = RandomTape::new(0)
        .with_script(Stream::Learning, [Draw::Count(0)])
        .with_script(Stream::Membership, [Draw::Flip(false)]);
    let log = smsp_online(&nonmono(0.5), &single(4.0), &GREEDY, &tape).unwrap();
    assert_eq!(log.zero_candidates, vec![0]);
    assert_eq!(log.weights.get(0), 0.0);
    assert!(log.output.is_empty());
}

#[test]
fn simulated_single_element() {
    let to_m = RandomTape::new(0).with_script(Stream::Membership, [Draw::Flip(true)]);
    let log = smsp_simulated(&nonmono(0.5), &single(4.0), &GREEDY, &to_m).unwrap();
    assert_eq!(log.greedy, vec![0]);
    assert!(log.candidates.is_empty() && log.zero_candidates.is_empty() && log.output.is_empty());

    let to_n = RandomTape::new(0).with_script(Stream::Membership, [Draw::Flip(false), Draw::Flip(true)]);
    let log = smsp_simulated(&nonmono(0.5), &single(4.0), &GREEDY, &to_n).unwrap();
    assert_eq!(log.output, vec![0]);
    assert_eq!(log.weights.get(0), 4.0);

    let to_zero = RandomTape::new(0).with_script(Stream::Membership, [Draw::Flip(false), Draw::Flip(false)]);
    let log = smsp_simulated(&nonmono(0.5), &single(4.0), &GREEDY, &to_zero).unwrap();
    assert_eq!(log.zero_candidates, vec![0]);
    assert_eq!(log.weights.get(0), 0.0);
    assert!(log.output.is_empty());
}

#[test]
fn simulated_coverage_trace() {
    // 0 (gain 2) -> N; 1 (gain 2) -> M; 2 (gain 1) -> M
    let tape = RandomTape::new(0).with_script(
        Stream::Membership,
        [Draw::Flip(false), Draw::Flip(true), Draw::Flip(true), Draw::Flip(true)],
    );
    let log = smsp_simulated(&nonmono(0.5), &coverage3(), &GREEDY, &tape).unwrap();
    assert_eq!(log.greedy, vec![1, 2]);
    assert_eq!(log.candidates, vec![0]);
    assert_eq!(log.learning, vec![1, 2]);
    assert_eq!(log.weights.as_slice(), &[2.0, 2.0, 1.0]);
    assert_eq!(log.linear_order, vec![0]);
    assert_eq!(log.output, vec![0]);
    assert_eq!((log.f_greedy, log.w_greedy, log.w_candidates, log.f_output), (3.0, 3.0, 2.0, 2.0));
}

#[test]
fn monotone_simulated_single_element() {
    let to_m = RandomTape::new(0).with_script(Stream::Membership, [Draw::Flip(true)]);
    let log = msmsp_simulated(&mono(0.5), &single(4.0), &GREEDY, &to_m).unwrap();
    assert_eq!(log.greedy, vec![0]);
    assert!(log.output.is_empty());
    let to_n = RandomTape::new(0).with_script(Stream::Membership, [Draw::Flip(false)]);
    let log = msmsp_simulated(&mono(0.5), &single(4.0), &GREEDY, &to_n).unwrap();
    assert_eq!(log.output, vec![0]);
    assert_eq!(log.f_output, 4.0);
}

#[test]
fn monotone_online_takes_every_greedy_arrival() {
    let tape = RandomTape::new(0).with_script(Stream::Learning, [Draw::Count(0)]);
    let log = msmsp_online(&mono(0.5), &coverage3(), &GREEDY, &tape).unwrap();
    assert_eq!(log.candidates, vec![0, 1, 2]);
    assert_eq!(log.output.len(), 2);
}

#[test]
fn variant_checks() {
    let cut = instance(MatroidSpec::Uniform { k: 1 }, ObjectiveSpec::Cut { edges: vec![(0, 1, 1.0)] }, 2);
    let tape = RandomTape::new(1);
    assert!(matches!(msmsp_online(&mono(0.5), &cut, &GREEDY, &tape), Err(ReductionError::VariantMismatch(_))));
    assert!(matches!(msmsp_simulated(&mono(0.5), &cut, &GREEDY, &tape), Err(ReductionError::VariantMismatch(_))));
    assert!(matches!(smsp_online(&mono(0.5), &cut, &GREEDY, &tape), Err(ReductionError::VariantMismatch(_))));
    assert!(smsp_online(&nonmono(0.5), &cut, &GREEDY, &tape).is_ok());
}

#[test]
fn partition_linear_needs_partition_matroid() {
    let tape = RandomTape::new(1);
    let err = smsp_online(&nonmono(0.5), &coverage3(), &LinearKey::Partition, &tape).unwrap_err();
    assert!(matches!(err, ReductionError::Online(_)));
}

#[test]
fn coupled_degenerate_sets() {
    let inst = coverage3();
    let tape = RandomTape::new(5);
    let (a, b) = coupled_pair(&[0, 1, 2], &[0, 1, 2], &[], &nonmono(0.5), &inst, &GREEDY, &tape).unwrap();
    assert!(a.candidates.is_empty() && b.candidates.is_empty() && a.output.is_empty() && b.output.is_empty());
    let (a, b) = coupled_pair(&[1], &[], &[2, 0], &nonmono(0.5), &inst, &GREEDY, &tape).unwrap();
    assert!(a.candidates.is_empty() && b.candidates.is_empty() && a.output.is_empty() && b.output.is_empty());
    assert!(coupled_pair(&[1], &[], &[2], &nonmono(0.5), &inst, &GREEDY, &tape).is_err());
}

#[test]
fn bound_examples() {
    assert!((choose_p(1.0, Variant::Nonmonotone, None, false).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(choose_p(5.0, Variant::Monotone, None, true).unwrap(), 0.75);
    assert!((choose_p(E, Variant::Nonmonotone, Some(1.0 / E), false).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((choose_p(2.0, Variant::Monotone, None, false).unwrap() - 5.0 / 6.0).abs() < 1e-15);
    assert_eq!(choose_p(0.5, Variant::Monotone, None, false), Err(BoundError::InvalidAlpha(0.5)));
    assert!(choose_p(2.0, Variant::Nonmonotone, None, true).is_err());

    let unitary = ratio_bound(E, Variant::Nonmonotone, None, Some(1.0 / E)).unwrap();
    assert!((unitary - 96.0 * E).abs() < 1e-9);
    assert_eq!(unitary.round(), 261.0);
    assert_eq!(ratio_bound(8.0, Variant::Nonmonotone, None, Some(0.5)).unwrap(), 2496.0);
    for k in 1..=5 {
        let kf = k as f64;
        let a = kf * E;
        let non = ratio_bound(a, Variant::Nonmonotone, None, Some(1.0 / E)).unwrap();
        assert!((non - 24.0 * kf * E * (3.0 * kf + 1.0)).abs() < 1e-9 * non);
        let mon = ratio_bound(a, Variant::Monotone, None, Some(1.0 / E)).unwrap();
        assert!((mon - 8.0 * kf * E * (kf + 1.0)).abs() < 1e-9 * mon);
    }
    assert_eq!(ratio_bound(1.0, Variant::Nonmonotone, None, None).unwrap(), 96.0);
    assert_eq!(ratio_bound(1.0, Variant::Nonmonotone, Some(3), None).unwrap(), 288.0);
    assert_eq!(ratio_bound(2.0, Variant::Monotone, None, None).unwrap(), 48.0);
    assert_eq!(ratio_bound(2.0, Variant::Monotone, Some(2), None).unwrap(), 96.0);
    assert_eq!(opt_probability_ratio(2.0).unwrap(), 32.0);
    assert!(ratio_bound(2.0, Variant::Monotone, Some(2), Some(0.5)).is_err());
}

#[test]
fn laminar_examples() {
    let mono = laminar_ratio(0.976299, Variant::Monotone).unwrap();
    assert!((mono.round() - 144.0).abs() <= 1.0, "{mono}");
    let non = laminar_ratio(0.023769, Variant::Nonmonotone).unwrap();
    assert!((non.round() - 585.0).abs() <= 1.0, "{non}");
    assert!(matches!(laminar_ratio(0.5, Variant::Monotone), Err(BoundError::BetaOutOfRange { .. })));
    assert!(matches!(laminar_ratio(0.5, Variant::Nonmonotone), Err(BoundError::BetaOutOfRange { .. })));
    let (p, r) = laminar_optimum(Variant::Monotone, 1e-5);
    assert!((p - 0.976299).abs() < 1e-3 && (r - mono).abs() < 1e-3);
    let (p, r) = laminar_optimum(Variant::Nonmonotone, 1e-5);
    assert!((p - 0.023769).abs() < 1e-3 && (r - non).abs() < 1e-3);
}

#[test]
fn table_has_the_known_rows() {
    let rows = bound_table(&[1, 2]);
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0].ratio.round(), 261.0);
    assert_eq!(rows[1].ratio, 2496.0);
    assert_eq!(rows[6].ratio.round(), 585.0);
    assert_eq!(rows[7].ratio.round(), 144.0);
}

// --- structural invariants on random instances --------------------------------

fn random_instance() -> impl Strategy<Value = Instance> {
    (2usize..=8).prop_flat_map(|n| {
        let matroid = prop_oneof![
            (1..=n).prop_map(|k| MatroidSpec::Uniform { k }),
            proptest::collection::vec(0..3usize, n)
                .prop_map(|c| MatroidSpec::Partition { class_of: c, capacities: Some(vec![1, 2, 1]) }),
            proptest::collection::vec((0..4usize, 0..4usize), n)
                .prop_map(|e| MatroidSpec::Graphic { vertices: Some(4), edges: e.into_iter().map(|(a, b)| [a, b]).collect() }),
        ];
        let objective = prop_oneof![
            proptest::collection::vec(proptest::collection::vec(0..10usize, 0..4), n)
                .prop_map(|covers| ObjectiveSpec::Coverage { covers, item_weights: None }),
            proptest::collection::vec((0..n, 0..n, 0.1f64..2.0), 1..2 * n).prop_map(|edges| ObjectiveSpec::Cut { edges }),
            (proptest::collection::vec(0.0f64..3.0, n), 0.0f64..2.0).prop_map(|(weights, offset)| ObjectiveSpec::Shifted {
                base: Box::new(ObjectiveSpec::MaxWeight { weights }),
                offset
            }),
        ];
        (matroid, objective).prop_map(move |(m, o)| instance(m, o, n))
    })
}

fn check_structure(log: &TrialLog, inst: &Instance) -> Result<(), TestCaseError> {
    let f = &inst.objective;
    prop_assert!(inst.matroid.is_independent(&log.greedy).unwrap());
    prop_assert!(inst.matroid.is_independent(&log.output).unwrap());
    for u in &log.output {
        prop_assert!(log.candidates.contains(u));
    }
    for u in &log.candidates {
        prop_assert!(!log.learning.contains(u));
        prop_assert!(!log.zero_candidates.contains(u));
    }
    for &u in inst.elements() {
        if !log.candidates.contains(&u) && !log.greedy.contains(&u) {
            prop_assert_eq!(log.weights.get(u), 0.0);
        }
    }
    // w(u) = f(u | M_u) on M
    for (i, &u) in log.greedy.iter().enumerate() {
        let gain = f.marginal(u, &log.greedy[..i]).unwrap();
        prop_assert!((log.weights.get(u) - gain.max(0.0)).abs() < 1e-9);
    }
    // w(M) + f(∅) = f(M) = f_w(M)
    prop_assert!((log.w_greedy + log.f_empty - log.f_greedy).abs() < 1e-9);
    let fw = convolve_fw(f, &log.weights, &log.greedy).unwrap();
    prop_assert!((fw - log.f_greedy).abs() < 1e-9);
    // every element is routed exactly once
    let mut all = [log.learning.clone(), log.candidates.clone(), log.zero_candidates.clone()].concat();
    all.sort_unstable();
    prop_assert_eq!(all, inst.elements().to_vec());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonmonotone_logs_are_consistent(inst in random_instance(), seed in any::<u64>(), p in 0.05f64..0.95) {
        let cfg = nonmono(p);
        let tape = RandomTape::new(seed);
        for algorithm in [Algorithm::Online, Algorithm::Simulated] {
            let log = run(algorithm, &cfg, &inst, &GREEDY, &tape).unwrap();
            check_structure(&log, &inst)?;
        }
    }

    #[test]
    fn monotone_logs_are_consistent(inst in random_instance(), seed in any::<u64>(), p in 0.05f64..0.95) {
        prop_assume!(inst.objective.is_monotone());
        let cfg = mono(p);
        let tape = RandomTape::new(seed);
        for algorithm in [Algorithm::Online, Algorithm::Simulated] {
            let log = run(algorithm, &cfg, &inst, &GREEDY, &tape).unwrap();
            check_structure(&log, &inst)?;
        }
    }

    #[test]
    fn coupled_logs_agree(inst in random_instance(), seed in any::<u64>()) {
        let mut coins = RandomTape::new(seed).coins(Stream::Custom(1));
        use crate::tape::Coins;
        let l: Vec<usize> = inst.elements().iter().copied().filter(|_| coins.bernoulli(0.5)).collect();
        let f: Vec<usize> = inst.elements().iter().copied().filter(|_| coins.bernoulli(0.4)).collect();
        let mut order: Vec<usize> = inst.elements().iter().copied().filter(|u| !l.contains(u)).collect();
        coins.shuffle(&mut order);
        let tape = RandomTape::new(seed ^ 0xABCD);
        let (a, b) = coupled_pair(&l, &f, &order, &nonmono(0.4), &inst, &GREEDY, &tape).unwrap();
        prop_assert_eq!(&a.greedy, &b.greedy);
        prop_assert_eq!(&a.candidates, &b.candidates);
        prop_assert_eq!(&a.zero_candidates, &b.zero_candidates);
        prop_assert_eq!(&a.learning, &b.learning);
        prop_assert_eq!(&a.weights, &b.weights);
        prop_assert_eq!(&a.output, &b.output);
    }
}
