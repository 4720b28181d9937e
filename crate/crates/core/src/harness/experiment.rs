//! Seeded Monte Carlo driver.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use super::{generate_instance, HarnessError};
use crate::exec::{try_map_indexed, Execution};
use crate::instance::Instance;
use crate::online::{LinearFactory, LinearKey, OnlineAlgorithm, PartialMsp, StreamSetup};
use crate::reduction::{choose_p, run, Algorithm, ReductionConfig, Variant};
use crate::stats::{frequency, round_sig, summarize};
use crate::tape::{RandomTape, Stream};

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSource {
    Path(PathBuf),
    Generator { spec: String, seed: u64 },
}

impl InstanceSource {
    pub fn load(&self) -> Result<Instance, HarnessError> {
        match self {
            InstanceSource::Path(path) => Ok(Instance::load(path)?),
            InstanceSource::Generator { spec, seed } => generate_instance(spec, *seed),
        }
    }
}

/// What one trial runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Reduction(Algorithm),
    /// The linear algorithm alone, on the singleton values `f(u | ∅)`.
    Linear,
}

impl FromStr for Mode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Mode::Linear),
            other => other
                .parse()
                .map(Mode::Reduction)
                .map_err(|_| HarnessError::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PPolicy {
    Auto,
    Fixed(f64),
}

impl FromStr for PPolicy {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(PPolicy::Auto);
        }
        s.parse()
            .map(PPolicy::Fixed)
            .map_err(|_| HarnessError::InvalidConfig(format!("p must be `auto` or a number, got {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::InvalidConfig(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub source: InstanceSource,
    pub mode: Mode,
    pub linear: LinearKey,
    pub variant: Variant,
    pub p: PPolicy,
    /// Overrides the linear algorithm's known guarantee.
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
    /// Known elements for [`Mode::Linear`]; they never arrive.
    pub known: Vec<usize>,
    pub execution: Execution,
}

impl ExperimentConfig {
    pub fn new(source: InstanceSource, mode: Mode, linear: LinearKey) -> Self {
        ExperimentConfig {
            source,
            mode,
            linear,
            variant: Variant::Nonmonotone,
            p: PPolicy::Auto,
            alpha: None,
            q: None,
            trials: 1000,
            seed: 0,
            format: OutputFormat::Jsonl,
            known: Vec::new(),
            execution: Execution::default(),
        }
    }

    /// Resolves `p`, `alpha` and `q` against `inst`.
    pub fn reduction_config(&self, inst: &Instance) -> Result<ReductionConfig, HarnessError> {
        let (alpha, q) = match self.alpha {
            Some(alpha) => (alpha, self.q),
            None => match self.linear.guarantee(inst.n(), &inst.matroid) {
                Some(g) => (g.alpha, Some(self.q.unwrap_or(g.q))),
                None if matches!(self.p, PPolicy::Fixed(_)) => (1.0, self.q),
                None => {
                    return Err(HarnessError::InvalidConfig(format!(
                        "no known guarantee for {} on this matroid; pass alpha explicitly",
                        self.linear
                    )))
                }
            },
        };
        let p = match self.p {
            PPolicy::Auto => choose_p(alpha, self.variant, q, false)?,
            PPolicy::Fixed(p) => p,
        };
        Ok(ReductionConfig::new(p, self.variant, alpha, q, None)?)
    }
}

/// Scalar summary of one trial, as emitted in JSON lines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub learning_len: usize,
    pub greedy_size: usize,
    pub candidates_size: usize,
    pub output: Vec<usize>,
    pub f_greedy: f64,
    pub w_greedy: f64,
    pub w_candidates: f64,
    pub w_output: f64,
    pub f_output: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatisticRow {
    pub statistic: String,
    pub mean: f64,
    pub se: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialAggregate {
    pub trials: usize,
    pub statistics: Vec<StatisticRow>,
    /// `(element, frequency in the output)` for every element.
    pub acceptance: Vec<(usize, f64)>,
}

impl TrialAggregate {
    pub fn from_records(records: &[TrialRecord], elements: &[usize]) -> Self {
        let trials = records.len();
        let stat = |name: &str, get: fn(&TrialRecord) -> f64| {
            let s = summarize(records.iter().map(get));
            StatisticRow { statistic: name.to_string(), mean: round_sig(s.mean), se: round_sig(s.se), trials }
        };
        let statistics = vec![
            stat("f_output", |r| r.f_output),
            stat("w_output", |r| r.w_output),
            stat("f_greedy", |r| r.f_greedy),
            stat("w_greedy", |r| r.w_greedy),
            stat("w_candidates", |r| r.w_candidates),
        ];
        let acceptance = elements
            .iter()
            .map(|&u| {
                let hits = records.iter().filter(|r| r.output.binary_search(&u).is_ok()).count();
                (u, round_sig(frequency(hits, trials).mean))
            })
            .collect();
        TrialAggregate { trials, statistics, acceptance }
    }

    pub fn statistic(&self, name: &str) -> Option<&StatisticRow> {
        self.statistics.iter().find(|s| s.statistic == name)
    }

    /// Writes `statistic,mean,se,trials` rows; acceptance frequencies follow
    /// as `accept[u]` rows with their binomial standard error.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "statistic,mean,se,trials")?;
        for s in &self.statistics {
            writeln!(out, "{},{},{},{}", s.statistic, s.mean, s.se, s.trials)?;
        }
        for &(u, freq) in &self.acceptance {
            let se = round_sig((freq * (1.0 - freq) / self.trials.max(1) as f64).sqrt());
            writeln!(out, "accept[{u}],{freq},{se},{}", self.trials)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub records: Vec<TrialRecord>,
    pub aggregate: TrialAggregate,
}

impl Experiment {
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, out: W) -> std::io::Result<()> {
        match format {
            OutputFormat::Jsonl => self.write_jsonl(out),
            OutputFormat::Csv => self.aggregate.write_csv(out),
        }
    }
}

pub fn run_trials(cfg: &ExperimentConfig) -> Result<Experiment, HarnessError> {
    let inst = cfg.source.load()?;
    run_trials_on(cfg, &inst)
}

/// Runs `cfg.trials` independent trials on `inst`. Trial `i` draws all its
/// randomness from `RandomTape::for_trial(cfg.seed, i)`.
pub fn run_trials_on(cfg: &ExperimentConfig, inst: &Instance) -> Result<Experiment, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::InvalidConfig("trials must be at least 1".into()));
    }
    let records = match cfg.mode {
        Mode::Reduction(algorithm) => {
            if !cfg.known.is_empty() {
                return Err(HarnessError::InvalidConfig("known elements only apply to the linear mode".into()));
            }
            let rc = cfg.reduction_config(inst)?;
            try_map_indexed(cfg.execution, cfg.trials, |i| {
                let tape = RandomTape::for_trial(cfg.seed, i as u64);
                let log = run(algorithm, &rc, inst, &cfg.linear, &tape)
                    .map_err(|source| HarnessError::Trial { trial: i, source })?;
                Ok::<_, HarnessError>(TrialRecord {
                    trial: i,
                    seed: tape.seed(),
                    learning_len: log.learning_len,
                    greedy_size: log.greedy.len(),
                    candidates_size: log.candidates.len(),
                    f_greedy: round_sig(log.f_greedy),
                    w_greedy: round_sig(log.w_greedy),
                    w_candidates: round_sig(log.w_candidates),
                    w_output: round_sig(log.weights.sum(&log.output)),
                    f_output: round_sig(log.f_output),
                    output: log.output,
                })
            })?
        }
        Mode::Linear => {
            for &u in &cfg.known {
                if !inst.matroid.ground().contains(u) {
                    return Err(HarnessError::InvalidConfig(format!("known element {u} is not in the ground set")));
                }
            }
            // fail on an unsupported matroid before spawning trials
            let setup = StreamSetup { len: inst.n(), matroid: &inst.matroid };
            cfg.linear.start(setup, RandomTape::new(cfg.seed).coins(Stream::Linear))?;
            try_map_indexed(cfg.execution, cfg.trials, |i| linear_trial(cfg, inst, i))?
        }
    };
    let aggregate = TrialAggregate::from_records(&records, inst.elements());
    Ok(Experiment { records, aggregate })
}

fn linear_trial(cfg: &ExperimentConfig, inst: &Instance, trial: usize) -> Result<TrialRecord, HarnessError> {
    let tape = RandomTape::for_trial(cfg.seed, trial as u64);
    let f = &inst.objective;
    let arriving: Vec<usize> = inst.elements().iter().copied().filter(|u| !cfg.known.contains(u)).collect();
    let order = tape.arrival_order(&arriving);
    let setup = StreamSetup { len: inst.n(), matroid: &inst.matroid };
    let inner = cfg.linear.start(setup, tape.coins(Stream::Linear))?;
    let mut alg: Box<dyn OnlineAlgorithm + '_> =
        Box::new(PartialMsp::new(inner, &cfg.known, order.len(), tape.coins(Stream::Interleave)));
    let mut weights = vec![0.0; inst.matroid.ground().id_bound()];
    for &u in &order {
        weights[u] = f.marginal(u, &[])?;
        alg.on_arrival(u, weights[u]);
    }
    let output = alg.finish();
    let w_output: f64 = output.iter().map(|&u| weights[u].max(0.0)).sum();
    Ok(TrialRecord {
        trial,
        seed: tape.seed(),
        learning_len: cfg.known.len(),
        greedy_size: 0,
        candidates_size: order.len(),
        f_greedy: 0.0,
        w_greedy: 0.0,
        w_candidates: 0.0,
        w_output: round_sig(w_output),
        f_output: round_sig(f.evaluate(&output)?),
        output,
    })
}
