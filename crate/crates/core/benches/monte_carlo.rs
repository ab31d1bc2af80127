use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use erasure_qec::experiments::{MemoryExperiment, TrialPolicy};
use erasure_qec::noise::NoiseConfig;
use std::hint::black_box;

const TRIALS: u64 = 16_384;

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("memory_trials");
    group.sample_size(10);
    group.throughput(Throughput::Elements(TRIALS));
    let policy = TrialPolicy::fixed(TRIALS);
    for (label, cfg) in [
        ("pauli", NoiseConfig::erasure(0.007, 0.0)),
        ("erasure", NoiseConfig::erasure(0.04, 0.98)),
    ] {
        for d in [5, 7] {
            let exp = MemoryExperiment::new(d, cfg.with_seed(1)).unwrap();
            let id = format!("{label}/d{d}");
            group.bench_with_input(BenchmarkId::new("sequential", &id), &exp, |b, exp| {
                b.iter(|| black_box(exp.run_sequential(&policy).unwrap()))
            });
            group.bench_with_input(BenchmarkId::new("parallel", &id), &exp, |b, exp| {
                b.iter(|| black_box(exp.run(&policy).unwrap()))
            });
        }
    }
    group.finish();
}

fn setup(c: &mut Criterion) {
    c.bench_function("build_d7_experiment", |b| {
        b.iter(|| black_box(MemoryExperiment::new(7, NoiseConfig::erasure(0.01, 0.5)).unwrap()))
    });
}

criterion_group!(benches, trials, setup);
criterion_main!(benches);
