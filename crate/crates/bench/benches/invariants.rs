use std::hint::black_box;

use catdyn::fit::{geometric_schedule, linear_schedule};
use catdyn::growth::{generator_seed, mass_growth, pol_mass_growth, yomdin_suite};
use catdyn::lattice::{char_poly, growth_rate_estimate, spectral_data};
use catdyn::metric::stable_translation_length;
use catdyn::{SpectralOptions, SuiteConfig};
use catdyn_bench::{companion, hyperbolic_triple, jordan_block, unipotent_triple};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn lattice(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice");
    for n in [4usize, 8, 16] {
        let a = companion(n);
        group.bench_with_input(BenchmarkId::new("char_poly", n), &a, |b, a| b.iter(|| char_poly(black_box(a))));
        group.bench_with_input(BenchmarkId::new("spectral_data", n), &a, |b, a| {
            b.iter(|| spectral_data(black_box(a), &SpectralOptions::default()))
        });
    }
    let j = jordan_block(6);
    let schedule = geometric_schedule(1 << 20, 4);
    group.bench_function("growth_rate_estimate/jordan6", |b| b.iter(|| growth_rate_estimate(black_box(&j), &schedule)));
    group.finish();
}

fn growth(c: &mut Criterion) {
    let hyp = hyperbolic_triple();
    let uni = unipotent_triple();
    let hyp_seed = generator_seed(hyp.sigma()).unwrap();
    let uni_seed = generator_seed(uni.sigma()).unwrap();
    let linear = linear_schedule(2048, 2048);
    let geometric = geometric_schedule(1 << 16, 16);
    let mut group = c.benchmark_group("growth");
    group.bench_function("mass_growth/hyperbolic/2048", |b| b.iter(|| mass_growth(&hyp, &hyp_seed, 0.5, &linear)));
    group.bench_function("pol_mass_growth/unipotent/65536", |b| b.iter(|| pol_mass_growth(&uni, &uni_seed, 0.0, &geometric)));
    group.sample_size(10);
    group.bench_function("yomdin_suite/hyperbolic", |b| b.iter(|| yomdin_suite(&hyp, &hyp_seed, None, &SuiteConfig::default())));
    group.finish();
}

fn metric(c: &mut Criterion) {
    let hyp = hyperbolic_triple();
    let mut group = c.benchmark_group("metric");
    group.sample_size(10);
    group.bench_function("stable_translation_length/64", |b| b.iter(|| stable_translation_length(&hyp, 64)));
    group.finish();
}

criterion_group!(benches, lattice, growth, metric);
criterion_main!(benches);
