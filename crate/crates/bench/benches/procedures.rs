use criterion::{criterion_group, criterion_main, Criterion};
use qsearch_bench::{collision_instance, distinctness_instance};
use qsearch_core::{fit_exponent, run_algorithm, AlgorithmId, Metric, RunConfig};

fn bench_bht(c: &mut Criterion) {
    let inst = collision_instance(1 << 12);
    let cfg = RunConfig::default();
    let mut seed = 0;
    c.bench_function("bht_collision_2^12", |b| {
        b.iter(|| {
            seed += 1;
            run_algorithm(AlgorithmId::BhtCollision, &inst, seed, &cfg).unwrap()
        })
    });
}

fn bench_two_level(c: &mut Criterion) {
    let inst = distinctness_instance(1 << 10);
    let cfg = RunConfig::default();
    let mut seed = 0;
    let mut group = c.benchmark_group("two_level");
    group.sample_size(20);
    group.bench_function("two_level_distinctness_2^10", |b| {
        b.iter(|| {
            seed += 1;
            run_algorithm(AlgorithmId::TwoLevelDistinctness, &inst, seed, &cfg).unwrap()
        })
    });
    group.finish();
}

fn bench_fit(c: &mut Criterion) {
    let points: Vec<(f64, f64)> = (9..=18)
        .map(|k| ((2f64).powi(k), (2f64).powi(k).powf(0.75)))
        .collect();
    c.bench_function("fit_exponent_10pt", |b| {
        b.iter(|| fit_exponent(Metric::TimeSteps, &points).unwrap())
    });
}

criterion_group!(procedures, bench_bht, bench_two_level, bench_fit);
criterion_main!(procedures);
