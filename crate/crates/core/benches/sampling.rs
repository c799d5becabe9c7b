use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use geomq::classify::{classify_region, DEFAULT_CLASS_TOL};
use geomq::exec::Execution;
use geomq::report::{run, Command};
use geomq::sampling::Sampler;
use geomq::spec::ManifoldSpec;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn classify(c: &mut Criterion) {
    let spec = ManifoldSpec::paper_example();
    let m = spec.metric().unwrap();
    let mut group = c.benchmark_group("classify_region");
    group.sample_size(10).warm_up_time(Duration::from_millis(500));
    for count in [1_000usize, 10_000] {
        for (name, exec) in MODES {
            let sampler = Sampler::Random { count, seed: 7 };
            group.bench_with_input(BenchmarkId::new(name, count), &sampler, |b, s| {
                b.iter(|| black_box(classify_region(&m, s, &spec.sample_box, DEFAULT_CLASS_TOL, exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn theorems(c: &mut Criterion) {
    let spec = ManifoldSpec::sum_v2();
    let mut group = c.benchmark_group("theorems");
    group.sample_size(10).warm_up_time(Duration::from_millis(500));
    for trials in [100usize, 2_000] {
        for (name, exec) in MODES {
            let cmd = Command::Theorems { trials, seed: 7 };
            group.bench_with_input(BenchmarkId::new(name, trials), &cmd, |b, cmd| {
                b.iter(|| black_box(run(cmd, "sum-v2", &spec, exec).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, classify, theorems);
criterion_main!(benches);
