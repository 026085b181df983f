use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ris_bench::realization;
use ris_core::harness::{run_trial, RunSpec};
use ris_core::schemes::rate_ot;

fn channel(c: &mut Criterion) {
    c.bench_function("generate_realization/200x2", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            realization(200, 2, black_box(seed))
        })
    });

    let r = realization(200, 8, 5);
    c.bench_function("rate_ot/200x8", |b| {
        b.iter(|| rate_ot(black_box(&r), 1.0, 1e-13).unwrap())
    });
}

fn trial(c: &mut Criterion) {
    let spec = RunSpec::default();
    let mut group = c.benchmark_group("trial");
    group.sample_size(20);
    group.bench_function("all_schemes", |b| {
        b.iter(|| run_trial(&spec, black_box(3)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, channel, trial);
criterion_main!(benches);
