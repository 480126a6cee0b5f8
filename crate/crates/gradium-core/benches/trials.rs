//! Sequential against parallel trial scheduling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gradium::harness::{run_suite_with, Exec, GenConfig, Suite};

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for suite in [Suite::EffSound, Suite::CoSound, Suite::ResSound] {
        let cfg = GenConfig { trials: 200, ..GenConfig::new(suite.default_algebra()) };
        for (tag, exec) in [("seq", Exec::Sequential), ("par", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(suite.to_string(), tag), &exec, |b, &exec| {
                b.iter(|| run_suite_with(suite, &cfg, exec).expect("suite runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
