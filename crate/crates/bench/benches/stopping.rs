use criterion::{criterion_group, criterion_main, Criterion};
use evsc_core::stopping::simulate_stopping_with_workers;
use evsc_core::StoppingConfig;

fn simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("stopping");
    group.sample_size(10);
    for (label, boundary) in [("c=2", 2.0), ("c=3", 3.0)] {
        let cfg = StoppingConfig::new(10_000, boundary, 2048, 10_000_000, 7).unwrap();
        group.bench_function(label, |b| b.iter(|| simulate_stopping_with_workers(&cfg, 1).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, simulate);
criterion_main!(benches);
