use std::hint::black_box;

use chemosched::sgbd::{group_closest, group_furthest, group_random};
use chemosched_bench::fixture;
use criterion::{criterion_group, criterion_main, Criterion};

fn grouping(c: &mut Criterion) {
    let (inst, _) = fixture(9, 96, 3);
    let mut group = c.benchmark_group("grouping/96x9");
    group.bench_function("furthest", |b| b.iter(|| group_furthest(black_box(&inst), 8, 1).unwrap()));
    group.bench_function("closest", |b| b.iter(|| group_closest(black_box(&inst), 8, 1).unwrap()));
    group.bench_function("random", |b| b.iter(|| group_random(black_box(&inst), 8, 1).unwrap()));
    group.finish();
}

criterion_group!(benches, grouping);
criterion_main!(benches);
