use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use smsp::exec::Execution;
use smsp::harness::{run_trials_on, generate_instance, ExperimentConfig, InstanceSource, Mode};
use smsp::online::LinearKey;
use smsp::reduction::Algorithm;

const CASES: [(&str, &str, LinearKey); 3] = [
    ("partition-coverage", "partition(n=40,classes=8)+coverage(universe=80)", LinearKey::Partition),
    ("uniform-cut", "uniform(n=40,k=6)+cut(density=0.3)", LinearKey::GreedyOnline),
    ("rank-one-linear", "uniform(n=100,k=1)+linear", LinearKey::DynkinCapped),
];

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for (label, spec, linear) in CASES {
        let inst = generate_instance(spec, 1).unwrap();
        for algorithm in [Algorithm::Online, Algorithm::Simulated] {
            for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
                let mut cfg = ExperimentConfig::new(InstanceSource::Generator { spec: spec.into(), seed: 1 }, Mode::Reduction(algorithm), linear);
                cfg.trials = 2000;
                cfg.execution = execution;
                let id = BenchmarkId::new(format!("{label}/{algorithm:?}"), name);
                group.bench_with_input(id, &cfg, |b, cfg| b.iter(|| run_trials_on(cfg, &inst).unwrap()));
            }
        }
    }
    group.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
