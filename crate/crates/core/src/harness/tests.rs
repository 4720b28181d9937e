use super::*;
use crate::exec::Execution;
use crate::instance::Instance;
use crate::matroid::{build_matroid, GroundSet, MatroidSpec};
use crate::objective::{build_objective, offline_opt, ObjectiveSpec};
use crate::online::LinearKey;
use crate::reduction::Algorithm;

fn generated(spec: &str) -> InstanceSource {
    InstanceSource::Generator { spec: spec.into(), seed: 7 }
}

#[test]
fn generator_is_deterministic() {
    let a = generate_doc("graphic(n=10,vertices=5)+coverage+shift(offset=2)", 3).unwrap();
    let b = generate_doc("graphic(n=10,vertices=5)+coverage+shift(offset=2)", 3).unwrap();
    assert_eq!(a, b);
    let c = generate_doc("graphic(n=10,vertices=5)+coverage+shift(offset=2)", 4).unwrap();
    assert_ne!(a, c);
}

#[test]
fn every_generator_builds() {
    for m in ["uniform(n=7,k=2)", "partition(n=7,classes=3,cap=2)", "laminar(n=7)", "graphic(n=7)", "transversal(n=7)", "linear(n=7)"] {
        for f in ["coverage", "linear", "maxweight", "cut", "weighted-rank"] {
            let inst = generate_instance(&format!("{m}+{f}"), 1).unwrap();
            assert_eq!(inst.n(), 7);
        }
    }
}

#[test]
fn empty_ground_set_generates() {
    let inst = generate_instance("uniform(n=0,k=1)+coverage", 0).unwrap();
    assert_eq!(inst.n(), 0);
}

#[test]
fn generator_errors() {
    assert!(matches!(generate_instance("cube(n=3)+coverage", 0), Err(HarnessError::UnknownGenerator(_))));
    assert!(matches!(generate_instance("uniform(n=3)+sphere", 0), Err(HarnessError::UnknownGenerator(_))));
    assert!(matches!(generate_instance("uniform(k=3)+coverage", 0), Err(HarnessError::BadGenerator(_))));
    assert!(matches!(generate_instance("uniform(n=3", 0), Err(HarnessError::BadGenerator(_))));
    assert!(matches!(generate_instance("uniform(n=2.5)+linear", 0), Err(HarnessError::BadGenerator(_))));
}

#[test]
fn partition_maxweight_optimum_is_best_single_element() {
    let inst = generate_instance("partition(n=12,classes=4)+maxweight", 5).unwrap();
    let (_, opt) = offline_opt(&inst.objective, &inst.matroid).unwrap();
    let best = inst.elements().iter().map(|&u| inst.objective.evaluate(&[u]).unwrap()).fold(0.0, f64::max);
    assert!((opt - best).abs() < 1e-12);
}

#[test]
fn shipped_corpus_builds() {
    let docs = shipped_docs().unwrap();
    assert_eq!(docs.len(), SHIPPED.len());
    for inst in shipped_instances().unwrap() {
        assert!(inst.n() > 0);
    }
}

#[test]
fn zero_trials_is_rejected() {
    let mut cfg = ExperimentConfig::new(generated("uniform(n=5,k=2)+coverage"), Mode::Reduction(Algorithm::Online), LinearKey::GreedyOnline);
    cfg.trials = 0;
    assert!(matches!(run_trials(&cfg), Err(HarnessError::InvalidConfig(_))));
}

#[test]
fn single_trial_aggregate_matches_record() {
    let mut cfg = ExperimentConfig::new(generated("uniform(n=6,k=2)+coverage"), Mode::Reduction(Algorithm::Online), LinearKey::GreedyOnline);
    cfg.trials = 1;
    let exp = run_trials(&cfg).unwrap();
    let rec = &exp.records[0];
    let agg = &exp.aggregate;
    assert_eq!(agg.statistic("f_output").unwrap().mean, rec.f_output);
    assert_eq!(agg.statistic("f_output").unwrap().se, 0.0);
    for &(u, freq) in &agg.acceptance {
        assert_eq!(freq, if rec.output.contains(&u) { 1.0 } else { 0.0 });
    }
}

#[test]
fn experiments_replay_and_ignore_threading() {
    for mode in [Mode::Reduction(Algorithm::Online), Mode::Reduction(Algorithm::Simulated), Mode::Linear] {
        let mut cfg = ExperimentConfig::new(generated("partition(n=9,classes=3)+coverage"), mode, LinearKey::Partition);
        cfg.trials = 200;
        cfg.seed = 99;
        cfg.execution = Execution::Sequential;
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        cfg.execution = Execution::Parallel;
        let c = run_trials(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let mut x = Vec::new();
        let mut y = Vec::new();
        a.write(OutputFormat::Jsonl, &mut x).unwrap();
        c.write(OutputFormat::Jsonl, &mut y).unwrap();
        assert_eq!(x, y);
    }
}

#[test]
fn csv_has_header_and_acceptance_rows() {
    let mut cfg = ExperimentConfig::new(generated("uniform(n=4,k=2)+linear"), Mode::Reduction(Algorithm::Simulated), LinearKey::GreedyOnline);
    cfg.trials = 10;
    let exp = run_trials(&cfg).unwrap();
    let mut out = Vec::new();
    exp.write(OutputFormat::Csv, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "statistic,mean,se,trials");
    assert_eq!(lines.iter().filter(|l| l.starts_with("accept[")).count(), 4);
}

#[test]
fn missing_guarantee_needs_alpha() {
    let cfg = ExperimentConfig::new(generated("graphic(n=6)+coverage"), Mode::Reduction(Algorithm::Online), LinearKey::Partition);
    assert!(matches!(run_trials(&cfg), Err(HarnessError::InvalidConfig(_))));
}

#[test]
fn linear_mode_rejects_foreign_known_elements() {
    let mut cfg = ExperimentConfig::new(generated("uniform(n=4,k=1)+linear"), Mode::Linear, LinearKey::Dynkin);
    cfg.known = vec![17];
    assert!(matches!(run_trials(&cfg), Err(HarnessError::InvalidConfig(_))));
    cfg.known = vec![0, 1];
    let exp = run_trials(&cfg).unwrap();
    assert!(exp.records.iter().all(|r| r.output.len() <= 1));
}

#[test]
fn parsers() {
    assert_eq!("linear".parse::<Mode>().unwrap(), Mode::Linear);
    assert_eq!("online".parse::<Mode>().unwrap(), Mode::Reduction(Algorithm::Online));
    assert!("offline".parse::<Mode>().is_err());
    assert_eq!("auto".parse::<PPolicy>().unwrap(), PPolicy::Auto);
    assert_eq!("0.25".parse::<PPolicy>().unwrap(), PPolicy::Fixed(0.25));
    assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
    assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
    assert!("everything".parse::<Suite>().is_err());
}

fn table_instance(values: Vec<f64>, n: usize) -> Instance {
    let g = GroundSet::dense(n);
    let m = build_matroid(MatroidSpec::Uniform { k: 2 }, g.clone()).unwrap();
    Instance::new("table", m, build_objective(ObjectiveSpec::Table { values }, &g).unwrap()).unwrap()
}

#[test]
fn supermodular_objective_skips_dependent_suites() {
    // f(S) = |S|^2 is supermodular
    let values = (0..8usize).map(|m| (m.count_ones() as f64).powi(2)).collect();
    let mut cfg = InvariantConfig::new(vec![table_instance(values, 3)]);
    cfg.trials = 50;
    let report = check_invariants(&cfg, Suite::Function);
    assert_eq!(report.entries[0].status, Status::Fail);
    assert!(report.entries[0].name.starts_with("submodular"));
    assert!(report.entries[1..].iter().all(|e| e.status == Status::Skipped));
    let report = check_invariants(&cfg, Suite::Lemmas);
    assert!(report.entries.iter().all(|e| e.status == Status::Skipped));
}

#[test]
fn small_suites_pass_on_a_coverage_instance() {
    let inst = generate_instance("partition(n=6,classes=3)+coverage(universe=10)", 2).unwrap();
    let mut cfg = InvariantConfig::new(vec![inst]);
    cfg.trials = 2000;
    cfg.coupling_seeds = 30;
    for suite in [Suite::Matroid, Suite::Function, Suite::Coupling, Suite::Bounds, Suite::Lemmas] {
        let report = check_invariants(&cfg, suite);
        assert!(report.passed(), "{suite:?}:\n{report}");
        assert!(report.count(Status::Pass) > 0);
    }
}

#[test]
fn linear_choice_follows_matroid() {
    let p = generate_instance("partition(n=6,classes=3)+linear", 0).unwrap();
    assert_eq!(linear_for(&p).0.name(), "partition");
    let u = generate_instance("uniform(n=6,k=3)+linear", 0).unwrap();
    assert_eq!(linear_for(&u).0.name(), "greedy-online");
    let g = generate_instance("graphic(n=6)+linear", 0).unwrap();
    assert_eq!(linear_for(&g).1.alpha, 2.0);
}
