use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use aztec_bench::{LARGE, SMALL};
use aztec_core::castle::build_castle;
use aztec_core::matchings::{count, weighted_sum, weighted_sum_framed};
use aztec_core::minmatch::construct_minimal;
use aztec_core::prism::cluster_var_at_point;
use aztec_core::quiver::Seed;

fn castle_building(c: &mut Criterion) {
    let (i, j, k) = LARGE;
    c.bench_function("build and trim C(4,3,2)", |b| {
        b.iter(|| build_castle(black_box(i), j, k).unwrap().trim_dangling())
    });
}

fn matching_sums(c: &mut Criterion) {
    for (i, j, k) in SMALL {
        let castle = build_castle(i, j, k).unwrap().trim_dangling();
        c.bench_function(&format!("count C({i},{j},{k})"), |b| {
            b.iter(|| count(black_box(&castle), 1_000_000).unwrap())
        });
        c.bench_function(&format!("weighted sum C({i},{j},{k})"), |b| {
            b.iter(|| weighted_sum(black_box(&castle), 1_000_000).unwrap())
        });
        c.bench_function(&format!("framed sum C({i},{j},{k})"), |b| {
            b.iter(|| weighted_sum_framed(black_box(&castle), 1_000_000).unwrap())
        });
    }
}

fn minimal_matching(c: &mut Criterion) {
    let (i, j, k) = LARGE;
    let castle = build_castle(i, j, k).unwrap().trim_dangling();
    c.bench_function("construct minimal C(4,3,2)", |b| {
        b.iter(|| construct_minimal(black_box(&castle)).unwrap())
    });
}

fn mutation(c: &mut Criterion) {
    c.bench_function("tau word 1213 framed", |b| {
        b.iter(|| {
            Seed::initial(true)
                .apply_word(black_box(&[1, 2, 1, 3]))
                .unwrap()
        })
    });
    c.bench_function("cluster variable at (2,1,0)", |b| {
        b.iter(|| cluster_var_at_point(black_box([2, 1, 0]), false).unwrap())
    });
}

criterion_group!(
    benches,
    castle_building,
    matching_sums,
    minimal_matching,
    mutation
);
criterion_main!(benches);
