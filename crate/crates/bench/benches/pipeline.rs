use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use potts_bench::fixture;
use potts_core::drinfeld::compute_p;
use potts_core::gfun::gram_check;
use potts_core::rotation::{build_rotation_set, factor_check};
use potts_core::sector::spectrum_match;
use potts_core::transfer::build_t;

fn bench_drinfeld_poly(c: &mut Criterion) {
    c.bench_function("compute_p_4_8", |b| {
        b.iter(|| compute_p(black_box(4), black_box(8)).unwrap())
    });
}

fn bench_gram(c: &mut Criterion) {
    let fx = fixture(4, 4, 0.5);
    c.bench_function("gram_check_4_4", |b| b.iter(|| gram_check(&fx.dd).unwrap()));
}

fn bench_transfer_build(c: &mut Criterion) {
    let fx = fixture(3, 6, 0.3);
    c.bench_function("build_t_3_6", |b| {
        b.iter(|| build_t(0, &fx.p, &fx.q, &fx.basis).unwrap())
    });
}

fn bench_spectrum(c: &mut Criterion) {
    let fx = fixture(3, 6, 0.3);
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("spectrum_match_3_6", |b| {
        b.iter(|| spectrum_match(&fx.dd, &fx.basis, &fx.p, &fx.q).unwrap())
    });
    group.finish();
}

fn bench_rotations(c: &mut Criterion) {
    let fx = fixture(3, 6, 0.3);
    let set = build_rotation_set(&fx.dd).unwrap();
    c.bench_function("rotation_identities_3_6", |b| {
        b.iter(|| {
            for mode in &set.modes {
                black_box(factor_check(&fx.dd, mode, &fx.q).unwrap());
            }
        })
    });
}

criterion_group!(
    benches,
    bench_drinfeld_poly,
    bench_gram,
    bench_transfer_build,
    bench_spectrum,
    bench_rotations
);
criterion_main!(benches);
