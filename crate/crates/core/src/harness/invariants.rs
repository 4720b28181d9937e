//! Invariant suites: exhaustive oracle checks, Monte Carlo lemma checks and
//! closed-form bound reproduction, collected into one report.
//!
//! Statistical conventions: equalities pass within `SLACK_SE` standard
//! errors, one-sided bounds get `SLACK_SE` standard errors of slack. The
//! acceptance-probability suites (partition, capped Dynkin) use 3.
//!
//! Every objective is first checked for submodularity (on at most
//! [`SUBMODULAR_LIMIT`] elements); if that fails, every entry that assumes
//! it is reported as skipped.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{generate_instance, run_trials_on, ExperimentConfig, HarnessError, InstanceSource, KUnion, Mode, ScaledOptimum};
use crate::exec::{map_indexed, Execution};
use crate::instance::Instance;
use crate::matroid::verify_axioms;
use crate::objective::{
    check_set_function, convolve_fw, greedy, max_weight_independent, offline_opt, WeightVector, SUBMODULAR_LIMIT,
};
use crate::online::{alpha_partition, alpha_partition_sweep, Guarantee, LinearFactory, LinearKey};
use crate::reduction::{
    bound_table, choose_p, coupled_pair, laminar_optimum, laminar_ratio, opt_probability_ratio, ratio_bound, run,
    Algorithm, ReductionConfig, TrialLog, Variant,
};
use crate::stats::{chi_square_uniform, frequency, summarize, Summary};
use crate::tape::{Coins, RandomTape, Stream};
use crate::VALUE_TOLERANCE;

/// Standard errors of slack for the lemma checks.
pub const SLACK_SE: f64 = 4.0;
/// Standard errors of slack for acceptance probabilities.
const PROB_SE: f64 = 3.0;
/// Largest ground (prefix) used by the exhaustive function checks.
const EXACT_LIMIT: usize = 8;
/// Largest ground (prefix) used by the exhaustive matroid checks.
const AXIOM_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantEntry {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub threshold: f64,
    pub anchor: &'static str,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InvariantReport {
    pub entries: Vec<InvariantEntry>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn get(&self, name: &str) -> Option<&InvariantEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{}\t{}\tmeasured={:.6}\tthreshold={:.6}\t{}", e.status, e.name, e.measured, e.threshold, e.anchor)?;
        }
        write!(
            f,
            "{} pass, {} fail, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Matroid,
    Function,
    Sampling,
    Lemmas,
    Coupling,
    Partition,
    Dynkin,
    Bounds,
    Theorem,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Matroid,
        Suite::Function,
        Suite::Sampling,
        Suite::Lemmas,
        Suite::Coupling,
        Suite::Partition,
        Suite::Dynkin,
        Suite::Bounds,
        Suite::Theorem,
    ];
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "matroid" => Suite::Matroid,
            "function" => Suite::Function,
            "sampling" => Suite::Sampling,
            "lemmas" => Suite::Lemmas,
            "coupling" => Suite::Coupling,
            "partition" => Suite::Partition,
            "dynkin" => Suite::Dynkin,
            "bounds" => Suite::Bounds,
            "theorem" => Suite::Theorem,
            "all" => Suite::All,
            other => return Err(HarnessError::InvalidConfig(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct InvariantConfig {
    pub instances: Vec<Instance>,
    /// Monte Carlo trials per statistical check.
    pub trials: usize,
    /// Number of random tuples in the coupling suite.
    pub coupling_seeds: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl InvariantConfig {
    pub fn new(instances: Vec<Instance>) -> Self {
        InvariantConfig { instances, trials: 20_000, coupling_seeds: 1000, seed: 0, execution: Execution::default() }
    }
}

/// Runs `suite` and reports every entry. Component errors become failing
/// entries; nothing is returned as an error.
pub fn check_invariants(cfg: &InvariantConfig, suite: Suite) -> InvariantReport {
    let mut r = Recorder::default();
    let gates: Vec<bool> = cfg.instances.iter().map(|inst| submodular_gate(inst, &mut r, suite)).collect();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        match s {
            Suite::Matroid => cfg.instances.iter().for_each(|inst| matroid_suite(inst, &mut r)),
            Suite::Function => per_instance(cfg, &gates, &mut r, FUNCTION, function_suite),
            Suite::Sampling => {
                per_instance(cfg, &gates, &mut r, SAMPLING, sampling_suite);
                arrival_uniformity(cfg, &mut r);
            }
            Suite::Lemmas => per_instance(cfg, &gates, &mut r, LEMMAS, lemma_suite),
            Suite::Coupling => coupling_suite(cfg, &mut r),
            Suite::Partition => r.guard("partition", |r| partition_suite(cfg, r)),
            Suite::Dynkin => r.guard("dynkin", |r| dynkin_suite(cfg, r)),
            Suite::Bounds => r.guard("bounds", bounds_suite),
            Suite::Theorem => per_instance(cfg, &gates, &mut r, THEOREM, theorem_suite),
            Suite::All => unreachable!(),
        }
    }
    InvariantReport { entries: r.entries }
}

// --- anchors ---------------------------------------------------------------

const A_AXIOMS: &str = "matroid axioms: the empty set is independent, downward closure, exchange";
const A_SUBMODULAR: &str = "objective is non-negative and submodular";
const A_FW_BELOW: &str = "f_w(S) <= f(S) for all S, with equality at the empty set";
const A_FW_PRESERVES: &str = "f_w is non-negative and submodular, and monotone when f is";
const A_SURPLUS: &str = "w(S) - f_w(S) is a monotone function of S";
const A_GREEDY_HALF: &str = "greedy output S satisfies f(S) >= f(C u S) / 2 for every independent C";
const A_UNION: &str = "sum_i f(S_i) >= f(union_i S_i)";
const A_SAMPLE: &str = "E[g(A(p))] >= (1 - p) g(empty) + p g(A) under independent inclusion";
const A_SAMPLE_CAPPED: &str = "E[g(A(p))] >= (1 - p) g(empty) when each element appears w.p. at most p";
const A_SAMPLE_SUPER: &str = "E[g(A(q))] <= q g(A) for normalized monotone supermodular g";
const A_ARRIVAL: &str = "arrival order is a uniformly random permutation";
const A_IDENTITY: &str = "w(M) + f(empty) = f(M) = f_w(M) on every trial";
const A_LEARNING: &str = "the learning set holds each element w.p. 1/2, independently";
const A_GREEDY_SAMPLE: &str = "E[f(Greedy(S))] >= f(OPT)/8 for S a half-sample, so E[f(M)] >= f(OPT)/8";
const A_GREEDY_SAMPLE_MONO: &str = "monotone: E[f(M)] >= (p/2) f(OPT)";
const A_WN: &str = "E[w(N)] = p E[w(M)]";
const A_WN_MONO: &str = "monotone: E[w(N)] = ((1 - p)/p) E[w(M)]";
const A_FWN: &str = "E[f_w(N)] >= f(empty)/(1+p) + p(1-p)/(1+p) E[f_w(M)]";
const A_FWN_MONO: &str = "monotone: E[f_w(N)] >= p f(empty) + (1 - p) E[f_w(M)]";
const A_OPTN: &str = "E[w(OPT_w(N))] >= p/(1+p) E[w(M)]";
const A_OPTN_MONO: &str = "monotone: E[w(OPT_w(N))] >= (1 - p) E[w(M)]";
const A_OPTN_GREEDY: &str = "greedy on N under w finds a maximum-weight independent subset of N";
const A_LINEAR: &str = "E[w(Q n N)] = E[w(Q)] >= E[w(OPT_w(N))] / alpha";
const A_OUT_WEIGHT: &str = "E[w(Q n N)] >= p/(alpha(1+p)) E[w(M)]";
const A_OUT_WEIGHT_MONO: &str = "monotone: E[w(Q n N)] >= (1 - p)/alpha E[w(M)]";
const A_DIFF: &str = "selection probability at most q gives E[w(Q n N) - f_w(Q n N)] <= q E[w(N) - f_w(N)]";
const A_GENERAL: &str = "E[f(Q n N)] >= E[f_w(Q n N)] >= p(1 - 2pq alpha)/(8 alpha (1+p)) f(OPT)";
const A_GENERAL_MONO: &str = "monotone: E[f_w(Q n N)] >= q(1-p)(p/(alpha q) - 1 + p)/2 f(OPT)";
const A_COUPLING: &str = "coupled online and simulated runs agree on (M, N, w, output)";
const A_PARTITION_BEST: &str = "partition MSP accepts each class maximum w.p. 1/alpha(n)";
const A_PARTITION_MAX: &str = "partition MSP accepts no element w.p. above 1/alpha(n)";
const A_PARTITION_ALPHA: &str = "alpha(n) <= e";
const A_DYNKIN: &str = "Dynkin selects the maximum w.p. about 1/e";
const A_DYNKIN_CAP: &str = "capped Dynkin selects every element w.p. at most 1/e";
const A_DYNKIN_VALUE: &str = "capped Dynkin collects at least w(max)/e in expectation";
const A_TABLE: &str = "competitive ratio table for matroid classes with known linear algorithms";
const A_LAMINAR: &str = "laminar ratio with greedy acceptance, beta = 2e(1-p) or 2e(1 - 1/(1+p))";
const A_CHOOSE_P: &str = "p = 1/(3 alpha), 1/(3 alpha q), (2 alpha + 1)/(2(alpha + 1)), or 3/4";
const A_THEOREM: &str = "E[f(Q n N)] >= f(OPT) / ratio_bound(alpha, q)";
const A_THEOREM_MONO: &str = "monotone: E[f(Q n N)] >= f(OPT) / ratio_bound(alpha, q)";
const A_OPT_PROB: &str = "optimum-probability linear algorithm with p = 3/4 gives f(OPT)/(16 alpha)";
const A_K_UNION: &str = "union of k recorded sets: E[f(union Q_i n N)] >= f(OPT)/(24 alpha(3 alpha + 1))";
const A_K_PICK: &str = "uniformly random one of k recorded sets: E[f(Q n N)] >= f(OPT)/(24 k alpha(3 alpha + 1))";

const FUNCTION: &[(&str, &str)] = &[
    ("convolution-below", A_FW_BELOW),
    ("convolution-preserves", A_FW_PRESERVES),
    ("surplus-monotone", A_SURPLUS),
    ("greedy-half", A_GREEDY_HALF),
    ("union-subadditive", A_UNION),
];
const SAMPLING: &[(&str, &str)] = &[
    ("sampling-independent", A_SAMPLE),
    ("sampling-capped", A_SAMPLE_CAPPED),
    ("sampling-supermodular", A_SAMPLE_SUPER),
];
const LEMMAS: &[(&str, &str)] = &[
    ("identity", A_IDENTITY),
    ("learning-half", A_LEARNING),
    ("learning-pairs", A_LEARNING),
    ("greedy-value", A_GREEDY_SAMPLE),
    ("candidate-weight", A_WN),
    ("candidate-convolution", A_FWN),
    ("candidate-optimum", A_OPTN),
    ("candidate-optimum-greedy", A_OPTN_GREEDY),
    ("linear-competitive", A_LINEAR),
    ("output-weight", A_OUT_WEIGHT),
    ("capped-difference", A_DIFF),
    ("general-ratio", A_GENERAL),
];
const THEOREM: &[(&str, &str)] = &[("guarantee", A_THEOREM)];

// --- recorder --------------------------------------------------------------

#[derive(Default)]
struct Recorder {
    entries: Vec<InvariantEntry>,
}

impl Recorder {
    fn push(&mut self, name: String, pass: bool, measured: f64, threshold: f64, anchor: &'static str) {
        let status = if pass { Status::Pass } else { Status::Fail };
        self.entries.push(InvariantEntry { name, status, measured, threshold, anchor });
    }

    fn skip(&mut self, name: String, anchor: &'static str) {
        self.entries.push(InvariantEntry { name, status: Status::Skipped, measured: f64::NAN, threshold: f64::NAN, anchor });
    }

    /// `deviation <= tol`.
    fn exact(&mut self, name: String, deviation: f64, tol: f64, anchor: &'static str) {
        self.push(name, deviation <= tol, deviation, tol, anchor);
    }

    /// `mean >= bound - k se`.
    fn at_least(&mut self, name: String, s: Summary, bound: f64, k: f64, anchor: &'static str) {
        let threshold = bound - k * s.se - VALUE_TOLERANCE;
        self.push(name, s.mean >= threshold, s.mean, threshold, anchor);
    }

    /// `mean <= bound + k se`.
    fn at_most(&mut self, name: String, s: Summary, bound: f64, k: f64, anchor: &'static str) {
        let threshold = bound + k * s.se + VALUE_TOLERANCE;
        self.push(name, s.mean <= threshold, s.mean, threshold, anchor);
    }

    /// `|mean - target| <= k se`.
    fn near(&mut self, name: String, s: Summary, target: f64, k: f64, anchor: &'static str) {
        let dev = (s.mean - target).abs();
        let threshold = k * s.se + VALUE_TOLERANCE;
        self.push(name, dev <= threshold, dev, threshold, anchor);
    }

    fn error(&mut self, name: String, err: HarnessError) {
        self.entries.push(InvariantEntry {
            name: format!("{name} ({err})"),
            status: Status::Fail,
            measured: f64::NAN,
            threshold: f64::NAN,
            anchor: "component error",
        });
    }

    fn guard(&mut self, name: &str, f: impl FnOnce(&mut Recorder) -> Result<(), HarnessError>) {
        if let Err(e) = f(self) {
            self.error(name.to_string(), e);
        }
    }
}

fn tag(name: &str, inst: &Instance) -> String {
    format!("{name}[{}]", inst.name)
}

type InstanceSuite = fn(&InvariantConfig, &Instance, &mut Recorder) -> Result<(), HarnessError>;

fn per_instance(cfg: &InvariantConfig, gates: &[bool], r: &mut Recorder, names: &[(&str, &'static str)], f: InstanceSuite) {
    for (inst, &ok) in cfg.instances.iter().zip(gates) {
        if ok {
            if let Err(e) = f(cfg, inst, r) {
                r.error(tag("suite", inst), e);
            }
        } else {
            for &(name, anchor) in names {
                r.skip(tag(name, inst), anchor);
            }
        }
    }
}

/// Records the submodularity entry (for suites that depend on it) and
/// returns whether the objective may be trusted.
fn submodular_gate(inst: &Instance, r: &mut Recorder, suite: Suite) -> bool {
    let elements = prefix(inst, SUBMODULAR_LIMIT);
    let values = subset_values(inst, &elements);
    let report = check_set_function(&elements, &values);
    if matches!(suite, Suite::Function | Suite::All) {
        let gap = if report.negative.is_some() { f64::INFINITY } else { report.max_gap.max(0.0) };
        r.exact(tag("submodular", inst), gap, VALUE_TOLERANCE, A_SUBMODULAR);
    }
    report.negative.is_none() && report.violation.is_none()
}

fn prefix(inst: &Instance, limit: usize) -> Vec<usize> {
    inst.elements().iter().copied().take(limit).collect()
}

fn members(elements: &[usize], mask: usize) -> Vec<usize> {
    elements.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u).collect()
}

fn subset_values(inst: &Instance, elements: &[usize]) -> Vec<f64> {
    (0..1usize << elements.len()).map(|mask| inst.objective.value(&members(elements, mask))).collect()
}

// --- matroid ---------------------------------------------------------------

fn matroid_suite(inst: &Instance, r: &mut Recorder) {
    let keep = prefix(inst, AXIOM_LIMIT);
    match inst.matroid.restrict(&keep).and_then(|m| verify_axioms(&m)) {
        Ok(report) => r.exact(tag("axioms", inst), if report.passed() { 0.0 } else { 1.0 }, 0.0, A_AXIOMS),
        Err(e) => r.error(tag("axioms", inst), e.into()),
    }
}

// --- exhaustive function checks --------------------------------------------

fn random_weights(inst: &Instance, coins: &mut impl Coins) -> WeightVector {
    let f = &inst.objective;
    let scale = inst.elements().iter().map(|&u| f.value(&[u]) - f.value(&[])).fold(1.0, f64::max);
    let mut w = WeightVector::zeros(inst.matroid.ground().id_bound());
    for &u in inst.elements() {
        w.set(u, coins.below(1001) as f64 / 1000.0 * scale);
    }
    w
}

fn fw_table(inst: &Instance, w: &WeightVector, elements: &[usize]) -> Result<Vec<f64>, HarnessError> {
    (0..1usize << elements.len())
        .map(|mask| Ok(convolve_fw(&inst.objective, w, &members(elements, mask))?))
        .collect()
}

fn function_suite(cfg: &InvariantConfig, inst: &Instance, r: &mut Recorder) -> Result<(), HarnessError> {
    let f = &inst.objective;
    let elements = prefix(inst, EXACT_LIMIT);
    let n = elements.len();
    let values = subset_values(inst, &elements);
    let mut coins = RandomTape::new(cfg.seed).coins(Stream::Custom(11));

    let (mut below, mut preserve, mut surplus) = (f64::INFINITY, 0.0f64, f64::INFINITY);
    let mut empty_gap = 0.0f64;
    for _ in 0..3 {
        let w = random_weights(inst, &mut coins);
        let fw = fw_table(inst, &w, &elements)?;
        empty_gap = empty_gap.max((fw[0] - values[0]).abs());
        for mask in 0..1usize << n {
            below = below.min(values[mask] - fw[mask]);
            for i in (0..n).filter(|i| mask >> i & 1 == 0) {
                let grown = mask | 1 << i;
                surplus = surplus.min((w.get(elements[i]) - fw[grown] + fw[mask]).min(f64::INFINITY));
                if f.is_monotone() {
                    preserve = preserve.max(fw[mask] - fw[grown]);
                }
            }
        }
        let report = check_set_function(&elements, &fw);
        if !report.passed() {
            preserve = preserve.max(report.max_gap.max(1.0));
        }
    }
    r.exact(tag("convolution-below", inst), (-below).max(empty_gap).max(0.0), VALUE_TOLERANCE, A_FW_BELOW);
    r.exact(tag("convolution-preserves", inst), preserve, VALUE_TOLERANCE, A_FW_PRESERVES);
    r.exact(tag("surplus-monotone", inst), (-surplus).max(0.0), VALUE_TOLERANCE, A_SURPLUS);

    let sub = inst.matroid.restrict(&elements)?;
    let s = greedy(f, &sub, &elements)?;
    let f_s = f.value(&s);
    let mut worst = 0.0f64;
    for mask in 0..1usize << n {
        let c = members(&elements, mask);
        if sub.is_independent(&c)? {
            let mut cs = c;
            cs.extend_from_slice(&s);
            cs.sort_unstable();
            cs.dedup();
            worst = worst.max(f.value(&cs) / 2.0 - f_s);
        }
    }
    r.exact(tag("greedy-half", inst), worst, VALUE_TOLERANCE, A_GREEDY_HALF);

    let mut worst = 0.0f64;
    for _ in 0..200 {
        let k = 1 + coins.below(4);
        let sets: Vec<Vec<usize>> =
            (0..k).map(|_| inst.elements().iter().copied().filter(|_| coins.bernoulli(0.4)).collect()).collect();
        let mut union: Vec<usize> = sets.concat();
        union.sort_unstable();
        union.dedup();
        let sum: f64 = sets.iter().map(|s| f.value(s)).sum();
        worst = worst.max(f.value(&union) - sum);
    }
    r.exact(tag("union-subadditive", inst), worst, VALUE_TOLERANCE, A_UNION);
    Ok(())
}

// --- sampling lemmas -------------------------------------------------------

/// Each element of `a` lands in one of `groups` classes uniformly; one class
/// is returned. Inclusion probability is `1/groups`, fully correlated within
/// a class.
fn grouped_sample(a: &[usize], groups: usize, coins: &mut impl Coins) -> Vec<usize> {
    let chosen = coins.below(groups);
    a.iter().copied().filter(|_| coins.below(groups) == chosen).collect()
}

fn sampling_suite(cfg: &InvariantConfig, inst: &Instance, r: &mut Recorder) -> Result<(), HarnessError> {
    let f = &inst.objective;
    let a = inst.elements().to_vec();
    let (f_empty, f_a) = (f.value(&[]), f.value(&a));
    let p = 0.5;
    let xs = map_indexed(cfg.execution, cfg.trials, |i| {
        let mut coins = RandomTape::for_trial(cfg.seed ^ 0x5A, i as u64).coins(Stream::Custom(12));
        let s: Vec<usize> = a.iter().copied().filter(|_| coins.bernoulli(p)).collect();
        f.value(&s)
    });
    r.at_least(tag("sampling-independent", inst), summarize(xs), (1.0 - p) * f_empty + p * f_a, SLACK_SE, A_SAMPLE);

    let groups = 3;
    let xs = map_indexed(cfg.execution, cfg.trials, |i| {
        let mut coins = RandomTape::for_trial(cfg.seed ^ 0x5B, i as u64).coins(Stream::Custom(13));
        f.value(&grouped_sample(&a, groups, &mut coins))
    });
    let q = 1.0 / groups as f64;
    r.at_least(tag("sampling-capped", inst), summarize(xs), (1.0 - q) * f_empty, SLACK_SE, A_SAMPLE_CAPPED);

    // g(S) = w(S) + f_w(∅) - f_w(S) is normalized, monotone and supermodular
    let sub = prefix(inst, EXACT_LIMIT);
    let w = random_weights(inst, &mut RandomTape::new(cfg.seed).coins(Stream::Custom(14)));
    let fw = fw_table(inst, &w, &sub)?;
    let g = |mask: usize| w.sum(&members(&sub, mask)) + fw[0] - fw[mask];
    let full = (1usize << sub.len()) - 1;
    let xs = map_indexed(cfg.execution, cfg.trials, |i| {
        let mut coins = RandomTape::for_trial(cfg.seed ^ 0x5C, i as u64).coins(Stream::Custom(15));
        let chosen = coins.below(groups);
        let mask = (0..sub.len()).filter(|_| coins.below(groups) == chosen).fold(0, |m, j| m | 1 << j);
        g(mask)
    });
    r.at_most(tag("sampling-supermodular", inst), summarize(xs), q * g(full), SLACK_SE, A_SAMPLE_SUPER);
    Ok(())
}

fn arrival_uniformity(cfg: &InvariantConfig, r: &mut Recorder) {
    for n in 2..=5usize {
        let elements: Vec<usize> = (0..n).collect();
        let orders: usize = (1..=n).product();
        let trials = cfg.trials.max(200 * orders);
        let ranks = map_indexed(cfg.execution, trials, |i| {
            permutation_rank(&RandomTape::for_trial(cfg.seed ^ 0xA7, i as u64).arrival_order(&elements))
        });
        let mut counts = vec![0u64; orders];
        for k in ranks {
            counts[k] += 1;
        }
        let (_, p_value) = chi_square_uniform(&counts);
        r.push(format!("arrival-uniform[n={n}]"), p_value >= 1e-3, p_value, 1e-3, A_ARRIVAL);
    }
}

/// Lehmer rank of a permutation of `0..n`.
fn permutation_rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

// --- lemma suite -----------------------------------------------------------

/// Picks the linear algorithm used for `inst` by the statistical suites,
/// with its guarantee: the unitary-partition algorithm, capped Dynkin on
/// rank 1, greedy acceptance on uniform matroids, and otherwise the
/// offline [`ScaledOptimum`] with `alpha = 2`.
pub fn linear_for(inst: &Instance) -> (Box<dyn LinearFactory>, Guarantee) {
    for key in [LinearKey::Partition, LinearKey::DynkinCapped, LinearKey::GreedyOnline] {
        if let Some(g) = key.guarantee(inst.n(), &inst.matroid) {
            return (Box::new(key), g);
        }
    }
    let scaled = ScaledOptimum { alpha: 2.0 };
    let g = scaled.guarantee(inst.n(), &inst.matroid).expect("always known");
    (Box::new(scaled), g)
}

/// Scalars of one simulated trial.
#[derive(Clone, Debug, Default)]
struct Stats {
    identity: f64,
    f_m: f64,
    w_m: f64,
    fw_m: f64,
    w_n: f64,
    fw_n: f64,
    w_opt_n: f64,
    opt_gap: f64,
    w_out: f64,
    fw_out: f64,
    f_out: f64,
}

fn best_independent_weight(inst: &Instance, w: &WeightVector, set: &[usize]) -> Result<f64, HarnessError> {
    let mut best = 0.0f64;
    for mask in 0..1usize << set.len() {
        let s = members(set, mask);
        if inst.matroid.is_independent(&s)? {
            best = best.max(w.sum(&s));
        }
    }
    Ok(best)
}

fn trial_stats(inst: &Instance, log: &TrialLog) -> Result<Stats, HarnessError> {
    let f = &inst.objective;
    let w = &log.weights;
    let fw_m = convolve_fw(f, w, &log.greedy)?;
    let opt_n = max_weight_independent(&inst.matroid, w.as_slice(), &log.candidates);
    let w_opt_n = w.sum(&opt_n);
    let opt_gap = if inst.n() <= EXACT_LIMIT {
        (best_independent_weight(inst, w, &log.candidates)? - w_opt_n).abs()
    } else {
        0.0
    };
    Ok(Stats {
        identity: (log.w_greedy + log.f_empty - log.f_greedy).abs().max((log.f_greedy - fw_m).abs()),
        f_m: log.f_greedy,
        w_m: log.w_greedy,
        fw_m,
        w_n: log.w_candidates,
        fw_n: convolve_fw(f, w, &log.candidates)?,
        w_opt_n,
        opt_gap,
        w_out: w.sum(&log.output),
        fw_out: convolve_fw(f, w, &log.output)?,
        f_out: log.f_output,
    })
}

fn collect<T: Send>(
    cfg: &InvariantConfig,
    salt: u64,
    f: impl Fn(&RandomTape) -> Result<T, HarnessError> + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    map_indexed(cfg.execution, cfg.trials, |i| f(&RandomTape::for_trial(cfg.seed ^ salt, i as u64))).into_iter().collect()
}

fn column(stats: &[Stats], f: impl Fn(&Stats) -> f64) -> Summary {
    summarize(stats.iter().map(f))
}

fn f_opt(inst: &Instance) -> Result<f64, HarnessError> {
    Ok(offline_opt(&inst.objective, &inst.matroid)?.1)
}

fn lemma_suite(cfg: &InvariantConfig, inst: &Instance, r: &mut Recorder) -> Result<(), HarnessError> {
    let (linear, g) = linear_for(inst);
    let linear = linear.as_ref();
    let opt = f_opt(inst)?;
    let f_empty = inst.objective.value(&[]);
    let (alpha, q) = (g.alpha, g.q);

    // learning set of the online form
    let p = 1.0 / 3.0;
    let rc = ReductionConfig::new(p, Variant::Nonmonotone, alpha, Some(q), None)?;
    let learning = collect(cfg, 0x11, |tape| Ok(run(Algorithm::Online, &rc, inst, linear, tape)?.learning))?;
    let n = inst.n();
    if n > 0 {
        let hits = |u: usize| learning.iter().filter(|l| l.binary_search(&u).is_ok()).count();
        let worst = inst.elements().iter().map(|&u| (frequency(hits(u), cfg.trials).mean - 0.5).abs()).fold(0.0, f64::max);
        let se = (0.25 / cfg.trials as f64).sqrt();
        r.push(tag("learning-half", inst), worst <= SLACK_SE * se, worst, SLACK_SE * se, A_LEARNING);
        let e = inst.elements();
        let pairs = [(e[0], e[n - 1]), (e[0], e[n / 2]), (e[n / 2], e[n - 1])];
        let mut worst = 0.0f64;
        for (a, b) in pairs.into_iter().filter(|(a, b)| a != b) {
            let both = learning.iter().filter(|l| l.binary_search(&a).is_ok() && l.binary_search(&b).is_ok()).count();
            worst = worst.max((frequency(both, cfg.trials).mean - 0.25).abs());
        }
        let se = (0.1875 / cfg.trials as f64).sqrt();
        r.push(tag("learning-pairs", inst), worst <= SLACK_SE * se, worst, SLACK_SE * se, A_LEARNING);
    } else {
        r.skip(tag("learning-half", inst), A_LEARNING);
        r.skip(tag("learning-pairs", inst), A_LEARNING);
    }

    let stats = collect(cfg, 0x12, |tape| trial_stats(inst, &run(Algorithm::Simulated, &rc, inst, linear, tape)?))?;
    nonmonotone_checks(inst, r, &stats, p, alpha, q, opt, f_empty, "");

    if inst.objective.is_monotone() {
        let pm = choose_p(alpha, Variant::Monotone, None, false)?;
        let rc = ReductionConfig::new(pm, Variant::Monotone, alpha, Some(q), None)?;
        let stats = collect(cfg, 0x13, |tape| trial_stats(inst, &run(Algorithm::Simulated, &rc, inst, linear, tape)?))?;
        monotone_checks(inst, r, &stats, pm, alpha, q, opt, f_empty);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn nonmonotone_checks(
    inst: &Instance,
    r: &mut Recorder,
    stats: &[Stats],
    p: f64,
    alpha: f64,
    q: f64,
    opt: f64,
    f_empty: f64,
    suffix: &str,
) {
    let name = |s: &str| tag(&format!("{s}{suffix}"), inst);
    let worst_identity = stats.iter().map(|s| s.identity).fold(0.0, f64::max);
    r.exact(name("identity"), worst_identity, VALUE_TOLERANCE, A_IDENTITY);
    r.at_least(name("greedy-value"), column(stats, |s| s.f_m), opt / 8.0, SLACK_SE, A_GREEDY_SAMPLE);
    r.near(name("candidate-weight"), column(stats, |s| s.w_n - p * s.w_m), 0.0, SLACK_SE, A_WN);
    let c = p * (1.0 - p) / (1.0 + p);
    r.at_least(
        name("candidate-convolution"),
        column(stats, |s| s.fw_n - c * s.fw_m),
        f_empty / (1.0 + p),
        SLACK_SE,
        A_FWN,
    );
    r.at_least(name("candidate-optimum"), column(stats, |s| s.w_opt_n - p / (1.0 + p) * s.w_m), 0.0, SLACK_SE, A_OPTN);
    let gap = stats.iter().map(|s| s.opt_gap).fold(0.0, f64::max);
    r.exact(name("candidate-optimum-greedy"), gap, VALUE_TOLERANCE, A_OPTN_GREEDY);
    r.at_least(name("linear-competitive"), column(stats, |s| s.w_out - s.w_opt_n / alpha), 0.0, SLACK_SE, A_LINEAR);
    r.at_least(
        name("output-weight"),
        column(stats, |s| s.w_out - p / (alpha * (1.0 + p)) * s.w_m),
        0.0,
        SLACK_SE,
        A_OUT_WEIGHT,
    );
    r.at_least(
        name("capped-difference"),
        column(stats, |s| q * (s.w_n - s.fw_n) - (s.w_out - s.fw_out)),
        0.0,
        SLACK_SE,
        A_DIFF,
    );
    let order_gap = stats.iter().map(|s| s.fw_out - s.f_out).fold(0.0, f64::max);
    let bound = p * (1.0 - 2.0 * p * q * alpha) / (8.0 * alpha * (1.0 + p)) * opt;
    let s = column(stats, |s| s.fw_out);
    let threshold = bound - SLACK_SE * s.se - VALUE_TOLERANCE;
    r.push(name("general-ratio"), order_gap <= VALUE_TOLERANCE && s.mean >= threshold, s.mean, threshold, A_GENERAL);
}

#[allow(clippy::too_many_arguments)]
fn monotone_checks(inst: &Instance, r: &mut Recorder, stats: &[Stats], p: f64, alpha: f64, q: f64, opt: f64, f_empty: f64) {
    let name = |s: &str| tag(&format!("{s}-monotone"), inst);
    let worst_identity = stats.iter().map(|s| s.identity).fold(0.0, f64::max);
    r.exact(name("identity"), worst_identity, VALUE_TOLERANCE, A_IDENTITY);
    r.at_least(name("greedy-value"), column(stats, |s| s.f_m), p / 2.0 * opt, SLACK_SE, A_GREEDY_SAMPLE_MONO);
    r.near(name("candidate-weight"), column(stats, |s| s.w_n - (1.0 - p) / p * s.w_m), 0.0, SLACK_SE, A_WN_MONO);
    r.at_least(
        name("candidate-convolution"),
        column(stats, |s| s.fw_n - (1.0 - p) * s.fw_m),
        p * f_empty,
        SLACK_SE,
        A_FWN_MONO,
    );
    r.at_least(name("candidate-optimum"), column(stats, |s| s.w_opt_n - (1.0 - p) * s.w_m), 0.0, SLACK_SE, A_OPTN_MONO);
    r.at_least(
        name("output-weight"),
        column(stats, |s| s.w_out - (1.0 - p) / alpha * s.w_m),
        0.0,
        SLACK_SE,
        A_OUT_WEIGHT_MONO,
    );
    let bound = q * (1.0 - p) * (p / (alpha * q) - 1.0 + p) / 2.0 * opt;
    r.at_least(name("general-ratio"), column(stats, |s| s.fw_out), bound, SLACK_SE, A_GENERAL_MONO);
}

// --- coupling --------------------------------------------------------------

const COUPLING_FAMILIES: [&str; 6] = [
    "uniform(n={n},k=2)+coverage",
    "partition(n={n},classes=3)+cut",
    "laminar(n={n},blocks=2,k=2)+maxweight",
    "graphic(n={n},vertices=4)+coverage+shift(offset=1)",
    "transversal(n={n},right=3)+weighted-rank",
    "linear(n={n},rows=3)+cut",
];

/// One coupled pair on a random instance with `n <= 8`. Returns the number
/// of disagreeing fields.
fn coupling_case(seed: u64) -> Result<usize, HarnessError> {
    let mut coins = RandomTape::new(seed).coins(Stream::Custom(21));
    let n = 1 + coins.below(8);
    let family = COUPLING_FAMILIES[coins.below(COUPLING_FAMILIES.len())].replace("{n}", &n.to_string());
    let inst = generate_instance(&family, seed)?;
    let (linear, _) = linear_for(&inst);
    let p = [0.25, 1.0 / 3.0, 0.5][coins.below(3)];
    let learning: Vec<usize> = inst.elements().iter().copied().filter(|_| coins.bernoulli(0.5)).collect();
    let selected: Vec<usize> = inst.elements().iter().copied().filter(|_| coins.bernoulli(p)).collect();
    let mut order: Vec<usize> = inst.elements().iter().copied().filter(|u| learning.binary_search(u).is_err()).collect();
    coins.shuffle(&mut order);
    let rc = ReductionConfig::new(p, Variant::Nonmonotone, 1.0, None, None)?;
    let (a, b) = coupled_pair(&learning, &selected, &order, &rc, &inst, linear.as_ref(), &RandomTape::new(seed ^ 0xC0))?;
    Ok([
        a.greedy == b.greedy,
        a.candidates == b.candidates,
        a.weights == b.weights,
        a.linear_output == b.linear_output,
        a.output == b.output,
    ]
    .iter()
    .filter(|same| !**same)
    .count())
}

fn coupling_suite(cfg: &InvariantConfig, r: &mut Recorder) {
    let results = map_indexed(cfg.execution, cfg.coupling_seeds, |s| {
        coupling_case(RandomTape::for_trial(cfg.seed ^ 0xC1, s as u64).seed())
    });
    for (s, res) in results.into_iter().enumerate() {
        let name = format!("coupling[{s}]");
        match res {
            Ok(diff) => r.exact(name, diff as f64, 0.0, A_COUPLING),
            Err(e) => r.error(name, e),
        }
    }
}

// --- linear MSP probabilities ----------------------------------------------

fn linear_outputs(
    cfg: &InvariantConfig,
    inst: &Instance,
    linear: LinearKey,
    salt: u64,
) -> Result<Vec<(Vec<usize>, f64)>, HarnessError> {
    let mut ec = ExperimentConfig::new(InstanceSource::Generator { spec: String::new(), seed: 0 }, Mode::Linear, linear);
    ec.trials = cfg.trials;
    ec.seed = cfg.seed ^ salt;
    ec.execution = cfg.execution;
    Ok(run_trials_on(&ec, inst)?.records.into_iter().map(|r| (r.output, r.w_output)).collect())
}

fn selection_frequencies(inst: &Instance, outputs: &[(Vec<usize>, f64)]) -> Vec<Summary> {
    inst.elements()
        .iter()
        .map(|u| frequency(outputs.iter().filter(|(o, _)| o.contains(u)).count(), outputs.len()))
        .collect()
}

fn partition_suite(cfg: &InvariantConfig, r: &mut Recorder) -> Result<(), HarnessError> {
    let n = 20;
    let inst = generate_instance("partition(n=20,classes=4)+linear", cfg.seed)?;
    let classes = inst.matroid.unitary_classes().expect("unitary partition");
    let target = 1.0 / alpha_partition(n);
    let outputs = linear_outputs(cfg, &inst, LinearKey::Partition, 0x31)?;
    let freq = selection_frequencies(&inst, &outputs);
    let weight = |u: usize| inst.objective.value(&[u]);
    let class_count = classes.iter().max().map_or(0, |c| c + 1);
    for c in 0..class_count {
        let best = inst
            .elements()
            .iter()
            .copied()
            .filter(|&u| classes[u] == c)
            .max_by(|&a, &b| weight(a).total_cmp(&weight(b)).then(b.cmp(&a)))
            .expect("non-empty class");
        r.near(format!("partition-best[class={c}]"), freq[best], target, PROB_SE, A_PARTITION_BEST);
    }
    let top = freq.iter().copied().max_by(|a, b| a.mean.total_cmp(&b.mean)).unwrap_or_default();
    let se = (target * (1.0 - target) / cfg.trials as f64).sqrt();
    r.at_most("partition-max".into(), Summary { se, ..top }, target, PROB_SE, A_PARTITION_MAX);
    let worst = alpha_partition_sweep(1_000_000).into_iter().fold(0.0, f64::max);
    r.push("partition-alpha-bound".into(), worst <= E, worst, E, A_PARTITION_ALPHA);
    Ok(())
}

fn dynkin_suite(cfg: &InvariantConfig, r: &mut Recorder) -> Result<(), HarnessError> {
    let inst = generate_instance("uniform(n=100,k=1)+linear", cfg.seed)?;
    let weight = |u: usize| inst.objective.value(&[u]);
    let max = inst.elements().iter().copied().max_by(|&a, &b| weight(a).total_cmp(&weight(b))).expect("n > 0");

    let outputs = linear_outputs(cfg, &inst, LinearKey::Dynkin, 0x41)?;
    let best = frequency(outputs.iter().filter(|(o, _)| o == &[max]).count(), outputs.len());
    let floor = 1.0 / E - 0.01;
    r.push("dynkin-best".into(), best.mean >= floor && best.mean <= 0.45, best.mean, floor, A_DYNKIN);

    let outputs = linear_outputs(cfg, &inst, LinearKey::DynkinCapped, 0x42)?;
    let freq = selection_frequencies(&inst, &outputs);
    let top = freq.iter().copied().max_by(|a, b| a.mean.total_cmp(&b.mean)).unwrap_or_default();
    let se = ((1.0 / E) * (1.0 - 1.0 / E) / cfg.trials as f64).sqrt();
    r.at_most("dynkin-capped-selection".into(), Summary { se, ..top }, 1.0 / E, PROB_SE, A_DYNKIN_CAP);
    let value = summarize(outputs.iter().map(|(_, w)| *w));
    r.at_least("dynkin-capped-value".into(), value, weight(max) / E, PROB_SE, A_DYNKIN_VALUE);
    Ok(())
}

// --- closed forms ----------------------------------------------------------

fn bounds_suite(r: &mut Recorder) -> Result<(), HarnessError> {
    let close = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let unitary = ratio_bound(E, Variant::Nonmonotone, None, Some(1.0 / E))?;
    r.exact("bound-unitary-partition".into(), close(unitary, 96.0 * E).max((unitary.round() - 261.0).abs()), 1e-12, A_TABLE);
    let transversal = ratio_bound(8.0, Variant::Nonmonotone, None, Some(0.5))?;
    r.exact("bound-transversal".into(), close(transversal, 2496.0), 1e-12, A_TABLE);
    for k in 1..=4usize {
        let kf = k as f64;
        let non = ratio_bound(kf * E, Variant::Nonmonotone, None, Some(1.0 / E))?;
        r.exact(format!("bound-sparse[k={k}]"), close(non, 24.0 * kf * E * (3.0 * kf + 1.0)), 1e-12, A_TABLE);
        let mono = ratio_bound(kf * E, Variant::Monotone, None, Some(1.0 / E))?;
        r.exact(format!("bound-sparse-monotone[k={k}]"), close(mono, 8.0 * kf * E * (kf + 1.0)), 1e-12, A_TABLE);
    }
    let table = bound_table(&[1, 2, 3]);
    let bad_rows = table.iter().filter(|row| !(row.ratio.is_finite() && row.ratio > 1.0)).count();
    r.exact("bound-table".into(), bad_rows as f64, 0.0, A_TABLE);

    for (variant, p, expected) in [(Variant::Monotone, 0.976299, 144.0), (Variant::Nonmonotone, 0.023769, 585.0)] {
        let ratio = laminar_ratio(p, variant)?;
        r.exact(format!("bound-laminar[{variant}]"), (ratio.round() - expected).abs(), 1.0, A_LAMINAR);
        let (best_p, _) = laminar_optimum(variant, 1e-5);
        r.exact(format!("laminar-optimum[{variant}]"), (best_p - p).abs(), 1e-3, A_LAMINAR);
    }

    let cases = [
        (choose_p(1.0, Variant::Nonmonotone, None, false)?, 1.0 / 3.0),
        (choose_p(2.0, Variant::Nonmonotone, None, false)?, 1.0 / 6.0),
        (choose_p(E, Variant::Nonmonotone, Some(1.0 / E), false)?, 1.0 / 3.0),
        (choose_p(1.0, Variant::Monotone, None, false)?, 0.75),
        (choose_p(3.0, Variant::Monotone, None, true)?, 0.75),
    ];
    let worst = cases.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    r.exact("choose-p".into(), worst, 1e-12, A_CHOOSE_P);
    Ok(())
}

// --- end-to-end guarantees -------------------------------------------------

fn theorem_suite(cfg: &InvariantConfig, inst: &Instance, r: &mut Recorder) -> Result<(), HarnessError> {
    let opt = f_opt(inst)?;
    let mut linears: Vec<(String, Box<dyn LinearFactory>)> =
        LinearKey::ALL.iter().map(|&k| (k.to_string(), Box::new(k) as Box<dyn LinearFactory>)).collect();
    let scaled = ScaledOptimum { alpha: 2.0 };
    linears.push(("scaled-optimum".into(), Box::new(scaled)));
    for (name, linear) in &linears {
        let Some(g) = linear.guarantee(inst.n(), &inst.matroid) else { continue };
        let linear = linear.as_ref();
        let rc = ReductionConfig::auto(Variant::Nonmonotone, g.alpha, Some(g.q), None, false)?;
        let ratio = ratio_bound(g.alpha, Variant::Nonmonotone, None, Some(g.q))?;
        let xs = collect(cfg, 0x51, |tape| Ok(run(Algorithm::Online, &rc, inst, linear, tape)?.f_output))?;
        r.at_least(tag(&format!("guarantee/{name}"), inst), summarize(xs), opt / ratio, SLACK_SE, A_THEOREM);
        if inst.objective.is_monotone() {
            let rc = ReductionConfig::auto(Variant::Monotone, g.alpha, Some(g.q), None, false)?;
            let ratio = ratio_bound(g.alpha, Variant::Monotone, None, Some(g.q))?;
            let xs = collect(cfg, 0x52, |tape| Ok(run(Algorithm::Online, &rc, inst, linear, tape)?.f_output))?;
            r.at_least(tag(&format!("guarantee-monotone/{name}"), inst), summarize(xs), opt / ratio, SLACK_SE, A_THEOREM_MONO);
        }
    }

    if inst.objective.is_monotone() {
        let rc = ReductionConfig::auto(Variant::Monotone, scaled.alpha, None, None, true)?;
        let ratio = opt_probability_ratio(scaled.alpha)?;
        let xs = collect(cfg, 0x53, |tape| Ok(run(Algorithm::Simulated, &rc, inst, &scaled, tape)?.f_output))?;
        r.at_least(tag("opt-probability", inst), summarize(xs), opt / ratio, SLACK_SE, A_OPT_PROB);
    }

    let k = 2;
    let union = KUnion { k, pick: None };
    if let Some(g) = union.guarantee(inst.n(), &inst.matroid) {
        let rc = ReductionConfig::auto(Variant::Nonmonotone, g.alpha, None, Some(k), false)?;
        let rows = collect(cfg, 0x54, |tape| {
            let all = run(Algorithm::Simulated, &rc, inst, &union, tape)?.f_output;
            let picks = (0..k)
                .map(|i| Ok(run(Algorithm::Simulated, &rc, inst, &KUnion { k, pick: Some(i) }, tape)?.f_output))
                .collect::<Result<Vec<f64>, HarnessError>>()?;
            Ok((all, picks))
        })?;
        let single = ratio_bound(g.alpha, Variant::Nonmonotone, None, None)?;
        let with_k = ratio_bound(g.alpha, Variant::Nonmonotone, Some(k), None)?;
        r.at_least(tag("k-union", inst), summarize(rows.iter().map(|(a, _)| *a)), opt / single, SLACK_SE, A_K_UNION);
        let pick = summarize(rows.iter().map(|(_, p)| p.iter().sum::<f64>() / k as f64));
        r.at_least(tag("k-union-pick", inst), pick, opt / with_k, SLACK_SE, A_K_PICK);
        let worst = rows.iter().map(|(a, p)| a - p.iter().sum::<f64>()).fold(0.0, f64::max);
        r.exact(tag("k-union-subadditive", inst), worst, VALUE_TOLERANCE, A_UNION);
    }
    Ok(())
}
