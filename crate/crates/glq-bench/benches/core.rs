//! Benchmarks of the exact-arithmetic hot paths: closed-form product
//! expansion, series convolution, the marginal pipeline, certified numeric
//! products, and the Plancherel sampler.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use glq_bench::{rat, tol};
use glq_core::certified::certified_product;
use glq_core::collections::SlotId;
use glq_core::ensembles::{convergence_table, marginal, MarginalConstraint};
use glq_core::partitions::Partition;
use glq_core::sampler::{PlancherelSampler, UniformSource};
use glq_core::series::ProductFactorSpec;

fn bench_pochhammer(c: &mut Criterion) {
    let spec = ProductFactorSpec::new(1, 1, -1, 0, rat(2, 1)).unwrap();
    c.bench_function("pochhammer_series/order64", |b| {
        b.iter(|| black_box(&spec).series(64).unwrap())
    });
}

fn bench_series_mul(c: &mut Criterion) {
    let a = ProductFactorSpec::new(1, 1, -1, 0, rat(2, 1))
        .unwrap()
        .series(64)
        .unwrap();
    let bseries = ProductFactorSpec::new(2, 1, 1, 0, rat(2, 1))
        .unwrap()
        .series(64)
        .unwrap();
    c.bench_function("series_mul/order64", |b| {
        b.iter(|| black_box(&a).mul(black_box(&bseries)).unwrap())
    });
}

fn bench_marginal(c: &mut Criterion) {
    let constraint =
        MarginalConstraint::single(SlotId::new(1, 0), Partition::new(vec![1]).unwrap());
    c.bench_function("marginal/n25_q2", |b| {
        b.iter(|| marginal(25, 2, black_box(&constraint)).unwrap())
    });
}

fn bench_convergence_table(c: &mut Criterion) {
    let constraint =
        MarginalConstraint::single(SlotId::new(1, 0), Partition::new(vec![1]).unwrap());
    let mut group = c.benchmark_group("convergence_table");
    group.sample_size(10);
    group.bench_function("n1..25_q2_tol1e-9", |b| {
        b.iter(|| convergence_table(2, black_box(&constraint), 1, 25, &tol(9)).unwrap())
    });
    group.finish();
}

fn bench_certified_product(c: &mut Criterion) {
    let spec = ProductFactorSpec::new(1, 1, 1, 0, rat(2, 1)).unwrap();
    c.bench_function("certified_product/C(1,2)_tol1e-30", |b| {
        b.iter(|| certified_product(black_box(&spec), &rat(1, 1), &tol(30)).unwrap())
    });
}

fn bench_plancherel_sampler(c: &mut Criterion) {
    let mut group = c.benchmark_group("plancherel_sampler");
    group.sample_size(10);
    group.bench_function("build_n20_q2", |b| {
        b.iter(|| PlancherelSampler::new(20, 2).unwrap())
    });
    group.bench_function("draw100_n20_q2", |b| {
        let mut sampler = PlancherelSampler::new(20, 2).unwrap();
        b.iter(|| {
            let mut rng = UniformSource::new(7);
            for _ in 0..100 {
                black_box(sampler.sample(&mut rng).unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_pochhammer,
    bench_series_mul,
    bench_marginal,
    bench_convergence_table,
    bench_certified_product,
    bench_plancherel_sampler
);
criterion_main!(benches);
