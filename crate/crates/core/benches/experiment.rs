use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tnpascal::experiment::{run_experiment, ExperimentConfig};
use tnpascal::tn::bd_inverse;
use tnpascal::{Execution, Family};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn inverse(c: &mut Criterion) {
    let family: Family = "lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)".parse().unwrap();
    let mut group = c.benchmark_group("bd_inverse");
    for n in [20, 50, 100] {
        let bd = family.clone().with_n(n).bd_exact().unwrap().map(|s| s.to_f64());
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &bd, |b, bd| {
                b.iter(|| bd_inverse(black_box(bd), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn experiment(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::default();
    cfg.set("sizes", "4,8,12,16").unwrap();
    cfg.set("digits", "30").unwrap();
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| run_experiment(black_box(&cfg), exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, inverse, experiment);
criterion_main!(benches);
