use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use sclub_bench::fixture;
use sclub_cli::bench::Family;
use sclub_core::engine::{solve, RunOptions};
use sclub_core::treedec::{heuristic_decomposition, nicify, Strategy};

fn paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_s3");
    for n in [250, 500, 1000, 2000] {
        let (inst, ntd) = fixture(Family::Path, n, 3, 0);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve(&inst, &ntd, &RunOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn two_trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("2tree_n60");
    group.sample_size(10);
    for s in [2, 3, 4] {
        let (inst, ntd) = fixture(Family::KTree { k: 2 }, 60, s, 7);
        group.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, _| {
            b.iter(|| solve(&inst, &ntd, &RunOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn planted(c: &mut Criterion) {
    let (inst, ntd) = fixture(Family::Planted { block: 6, noise: 3 }, 36, 3, 11);
    c.bench_function("planted_n36_s3", |b| {
        b.iter(|| solve(&inst, &ntd, &RunOptions { certificate: true, ..RunOptions::default() }).unwrap())
    });
}

fn nicify_large(c: &mut Criterion) {
    let g = Family::KTree { k: 3 }.build(2000, 2, 3).unwrap();
    c.bench_function("decompose_3tree_n2000", |b| {
        b.iter(|| nicify(&heuristic_decomposition(&g, Strategy::MinFill)).unwrap())
    });
}

criterion_group!(benches, paths, two_trees, planted, nicify_large);
criterion_main!(benches);
