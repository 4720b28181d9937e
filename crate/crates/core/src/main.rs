use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use smsp::exec::Execution;
use smsp::harness::{
    check_invariants, generate_doc, run_trials, shipped_instances, ExperimentConfig, HarnessError, InstanceSource,
    InvariantConfig, Mode, Suite,
};
use smsp::instance::InstanceDoc;
use smsp::matroid::{verify_axioms, EXHAUSTIVE_LIMIT};
use smsp::objective::{check_submodular, SUBMODULAR_LIMIT};
use smsp::online::LinearKey;
use smsp::reduction::{bound_table, choose_p, laminar_optimum, laminar_ratio, opt_probability_ratio, ratio_bound, Variant};
use smsp::Instance;

#[derive(Parser)]
#[command(name = "smsp", version, about = "Submodular matroid secretary reduction and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded Monte Carlo trials and print JSON lines or a CSV summary.
    Simulate(SimulateArgs),
    /// Print p and competitive-ratio bounds.
    Bounds(BoundsArgs),
    /// Run the invariant suites.
    Invariants(InvariantArgs),
    /// Exhaustively check the matroid axioms of an instance document.
    VerifyMatroid { path: PathBuf },
    /// Check submodularity and the convolution properties of an instance objective.
    VerifyFunction {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the instance document for a generator spec.
    Generate {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    instance: Option<PathBuf>,
    /// Generator spec, e.g. `uniform(n=12,k=3)+coverage(universe=20)`.
    #[arg(long)]
    generate: Option<String>,
    #[arg(long, default_value_t = 0)]
    generate_seed: u64,
    /// `online`, `simulated` or `linear`.
    #[arg(long, default_value = "online")]
    algorithm: String,
    #[arg(long, default_value = "greedy-online")]
    linear: String,
    #[arg(long, default_value = "nonmonotone")]
    variant: String,
    #[arg(long, default_value = "auto")]
    p: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "jsonl")]
    emit: String,
    /// Known elements for `--algorithm linear`, comma separated.
    #[arg(long = "partial-L", value_delimiter = ',')]
    partial_l: Vec<usize>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundVariant {
    Nonmonotone,
    Monotone,
    NonmonotoneCapped,
    MonotoneCapped,
    OptProbability,
    Laminar,
}

#[derive(Args)]
struct BoundsArgs {
    /// Competitiveness of the linear algorithm; without it the full table is printed.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value = "nonmonotone")]
    variant: BoundVariant,
    /// Number of recorded independent sets.
    #[arg(long)]
    k: Option<usize>,
    /// Evaluate the laminar ratio at this p instead of optimizing it.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct InvariantArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Directory of instance documents; defaults to the shipped corpus.
    #[arg(long)]
    instances: Option<PathBuf>,
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Random tuples for the coupling suite.
    #[arg(long, default_value_t = 1000)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Harness(HarnessError::InvalidConfig(_) | HarnessError::UnknownGenerator(_) | HarnessError::BadGenerator(_)) => 2,
            CliError::Harness(_) | CliError::Failed(_) => 1,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Bounds(a) => bounds(a),
        Command::Invariants(a) => invariants(a),
        Command::VerifyMatroid { path } => verify_matroid(&path),
        Command::VerifyFunction { path, seed } => verify_function(&path, seed),
        Command::Generate { spec, seed } => generate_doc(&spec, seed).map(|doc| println!("{}", doc.to_json())).map_err(Into::into),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let source = match (a.instance, a.generate) {
        (Some(path), _) => InstanceSource::Path(path),
        (None, Some(spec)) => InstanceSource::Generator { spec, seed: a.generate_seed },
        (None, None) => return Err(usage("one of --instance or --generate is required")),
    };
    let mode: Mode = a.algorithm.parse()?;
    let linear: LinearKey = a.linear.parse().map_err(usage)?;
    let mut cfg = ExperimentConfig::new(source, mode, linear);
    cfg.variant = a.variant.parse().map_err(usage)?;
    cfg.p = a.p.parse()?;
    cfg.alpha = a.alpha;
    cfg.q = a.q;
    cfg.trials = a.trials as usize;
    cfg.seed = a.seed;
    cfg.format = a.emit.parse()?;
    cfg.known = a.partial_l;
    cfg.execution = execution(a.sequential);
    if !cfg.known.is_empty() && mode != Mode::Linear {
        return Err(usage("--partial-L requires --algorithm linear"));
    }
    let exp = run_trials(&cfg)?;
    let mut out = BufWriter::new(io::stdout().lock());
    exp.write(cfg.format, &mut out).map_err(HarnessError::from)?;
    out.flush().map_err(HarnessError::from)?;
    Ok(())
}

fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    let Some(alpha) = a.alpha else {
        if matches!(a.variant, BoundVariant::Laminar) {
            return laminar(a.p);
        }
        println!("matroid,variant,alpha,q,p,ratio");
        for row in bound_table(&[1, 2, 3, 4]) {
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6}"));
            println!("{},{},{},{},{:.6},{:.4}", row.matroid, row.variant, opt(row.alpha), opt(row.q), row.p, row.ratio);
        }
        return Ok(());
    };
    let (variant, q, opt_probability) = match a.variant {
        BoundVariant::Nonmonotone => (Variant::Nonmonotone, None, false),
        BoundVariant::Monotone => (Variant::Monotone, None, false),
        BoundVariant::NonmonotoneCapped => (Variant::Nonmonotone, Some(a.q.ok_or_else(|| usage("capped bounds need --q"))?), false),
        BoundVariant::MonotoneCapped => (Variant::Monotone, Some(a.q.ok_or_else(|| usage("capped bounds need --q"))?), false),
        BoundVariant::OptProbability => (Variant::Monotone, None, true),
        BoundVariant::Laminar => return laminar(a.p),
    };
    let p = choose_p(alpha, variant, q, opt_probability).map_err(usage)?;
    let ratio = if opt_probability {
        opt_probability_ratio(alpha)
    } else {
        ratio_bound(alpha, variant, a.k, q)
    }
    .map_err(usage)?;
    println!("p = {p:.6}");
    println!("ratio = {ratio:.4}");
    Ok(())
}

fn laminar(p: Option<f64>) -> Result<(), CliError> {
    println!("variant,p,ratio");
    for variant in [Variant::Nonmonotone, Variant::Monotone] {
        let (p, ratio) = match p {
            Some(p) => (p, laminar_ratio(p, variant).map_err(usage)?),
            None => laminar_optimum(variant, 1e-6),
        };
        println!("{variant},{p:.6},{ratio:.4}");
    }
    Ok(())
}

fn load_dir(dir: &Path) -> Result<Vec<Instance>, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(HarnessError::from)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(usage(format!("no .json instances in {}", dir.display())));
    }
    paths.iter().map(|p| Ok(Instance::load(p).map_err(HarnessError::from)?)).collect()
}

fn invariants(a: InvariantArgs) -> Result<(), CliError> {
    let suite: Suite = a.suite.parse()?;
    let instances = match &a.instances {
        Some(dir) => load_dir(dir)?,
        None => shipped_instances()?,
    };
    let mut cfg = InvariantConfig::new(instances);
    cfg.trials = a.trials as usize;
    cfg.coupling_seeds = a.seeds;
    cfg.seed = a.seed;
    cfg.execution = execution(a.sequential);
    let report = check_invariants(&cfg, suite);
    if a.json {
        for e in &report.entries {
            println!("{}", serde_json::to_string(e).expect("entries serialize"));
        }
    } else {
        println!("{report}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} invariant(s) failed", report.failures().count())))
    }
}

fn verify_matroid(path: &Path) -> Result<(), CliError> {
    let doc = InstanceDoc::load(path).map_err(HarnessError::from)?;
    let m = doc.build_matroid().map_err(HarnessError::from)?;
    if m.len() > EXHAUSTIVE_LIMIT {
        return Err(usage(format!("exhaustive verification is limited to {EXHAUSTIVE_LIMIT} elements, got {}", m.len())));
    }
    let report = verify_axioms(&m).map_err(HarnessError::from)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed("matroid axioms violated".into()))
    }
}

fn verify_function(path: &Path, seed: u64) -> Result<(), CliError> {
    let inst = Instance::load(path).map_err(HarnessError::from)?;
    if inst.n() > SUBMODULAR_LIMIT {
        return Err(usage(format!("exhaustive verification is limited to {SUBMODULAR_LIMIT} elements, got {}", inst.n())));
    }
    let report = check_submodular(&inst.objective).map_err(HarnessError::from)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    let mut cfg = InvariantConfig::new(vec![inst]);
    cfg.seed = seed;
    let suite = check_invariants(&cfg, Suite::Function);
    println!("{suite}");
    if report.passed() && suite.passed() {
        Ok(())
    } else {
        Err(CliError::Failed("objective checks failed".into()))
    }
}
