use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lfmo_core::lfmo::exact_tail_probability;
use lfmo_core::rng::seeded;
use lfmo_core::stable::sample_stable;
use lfmo_core::{Convention, Dimension, ExactOptions, LfmoModel, StableParams, SubordinatorModel};
use std::hint::black_box;

fn exact_tail(c: &mut Criterion) {
    let model = SubordinatorModel::cpp_pareto(1.0, 2.5);
    let opts = ExactOptions::default();
    let mut group = c.benchmark_group("exact_tail");
    for n in [5u64, 15, 30] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| exact_tail_probability(n, n, black_box(0.7), &model, &opts).unwrap())
        });
    }
    group.finish();
}

fn top_k_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("top_k");
    for (label, dim) in [("n=1e6", Dimension::Exact(1_000_000)), ("log10n=40", Dimension::Log10(40.0))] {
        let model = LfmoModel::new(dim, SubordinatorModel::cpp_pareto(1.0, 1.5)).unwrap();
        let mut rng = seeded(1);
        group.bench_function(label, |b| b.iter(|| model.sample_upper_order_statistics(3, &mut rng).unwrap()));
    }
    group.finish();
}

fn stable_sampling(c: &mut Criterion) {
    let params = StableParams::new(1.5, 1.0, -1.0, 0.0, Convention::Whitt451).unwrap();
    let mut rng = seeded(2);
    c.bench_function("stable_alpha_1.5", |b| b.iter(|| sample_stable(&params, &mut rng).unwrap()));
}

fn pareto_psi(c: &mut Criterion) {
    let model = SubordinatorModel::cpp_pareto(1.0, 2.5);
    c.bench_function("pareto_psi", |b| b.iter(|| model.laplace_exponent(black_box(17.0)).unwrap()));
}

criterion_group!(benches, exact_tail, top_k_sampling, stable_sampling, pareto_psi);
criterion_main!(benches);
