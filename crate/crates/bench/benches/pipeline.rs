use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use weave_bench::fixtures;
use weave_core::homology::{intersection_orbit, orbit_size, reduce_to_primitive};
use weave_core::iso::woven_iso;
use weave_core::ReduceOptions;

fn reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for (name, t) in fixtures() {
        group.bench_function(name, |b| b.iter(|| reduce_to_primitive(black_box(&t), &ReduceOptions::default())));
    }
    group.finish();
}

fn iso(c: &mut Criterion) {
    let mut group = c.benchmark_group("iso");
    for (name, t) in fixtures() {
        let flipped = t.permute_components(&(0..t.n_components()).rev().collect::<Vec<_>>());
        group.bench_function(name, |b| b.iter(|| woven_iso(black_box(&t), black_box(&flipped))));
    }
    group.finish();
}

fn orbit(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit");
    for (name, t) in fixtures() {
        group.bench_function(format!("{name}/bfs"), |b| b.iter(|| intersection_orbit(black_box(&t), 10_000)));
        group.bench_function(format!("{name}/exact"), |b| b.iter(|| orbit_size(black_box(&t))));
    }
    group.finish();
}

criterion_group!(benches, reduce, iso, orbit);
criterion_main!(benches);
