//! Sequential vs parallel timings for the three data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rsprod::analysis::{exhaustive_distance_with, simulate, MaskModel};
use rsprod::bounds::bound_sweep;
use rsprod::{build_code, instantiate_standard, Exec};

fn modes() -> Vec<(&'static str, Exec)> {
    #[cfg(feature = "parallel")]
    return vec![("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];
    #[cfg(not(feature = "parallel"))]
    vec![("sequential", Exec::Sequential)]
}

fn exhaustive(c: &mut Criterion) {
    let pair = instantiate_standard(2).unwrap();
    let code = build_code(&pair, 3, 6).unwrap();
    let mut group = c.benchmark_group("exhaustive_distance q=4 r=3 k=6");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exhaustive_distance_with(&code, 1 << 24, exec).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("bound_sweep n=32 r=16");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| bound_sweep(32, 16, 1..=256, exec).unwrap())
        });
    }
    group.finish();
}

fn erasure_sim(c: &mut Criterion) {
    let pair = instantiate_standard(3).unwrap();
    let code = build_code(&pair, 3, 8).unwrap();
    let mut group = c.benchmark_group("erasure_sim q=8 r=3 k=8 uniform-p 0.3");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate(&code, MaskModel::UniformP(0.3), 500, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive, sweep, erasure_sim);
criterion_main!(benches);
