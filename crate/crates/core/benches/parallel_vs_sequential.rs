use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use scvol::oracle::mc_estimate;
use scvol::verify::{run_suite, Suite};
use scvol::volumes::volume_table;
use scvol::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel { threads: 0 }),
];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_estimate_d4_50k");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| mc_estimate(4, black_box(50_000), 42, exec).unwrap())
        });
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("volume_table_d12");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| volume_table(black_box(12), exec).unwrap())
        });
    }
    group.finish();
}

fn ratio_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_volumes_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_suite(black_box(Suite::Volumes), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, table, ratio_sweep);
criterion_main!(benches);
