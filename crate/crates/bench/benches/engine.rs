use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qsearch_core::{
    plan_grover, run_bbht, run_grover, BbhtConfig, MarkedSet, ResourceLedger, TruthSpace,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_planning(c: &mut Criterion) {
    c.bench_function("plan_grover_2^20", |b| {
        b.iter(|| plan_grover(black_box(1 << 20), black_box(3)).unwrap())
    });
}

fn bench_run_grover(c: &mut Criterion) {
    let plan = plan_grover(1 << 16, 1).unwrap();
    c.bench_function("run_grover_2^16", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        b.iter(|| {
            let ledger = ResourceLedger::new();
            let mut space = TruthSpace::new(MarkedSet::new(1 << 16, vec![7]));
            run_grover(&mut space, &plan, &mut rng, &ledger)
        })
    });
}

fn bench_run_bbht(c: &mut Criterion) {
    c.bench_function("run_bbht_2^16", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        b.iter(|| {
            let ledger = ResourceLedger::new();
            let mut space = TruthSpace::new(MarkedSet::new(1 << 16, vec![7]));
            run_bbht(&mut space, &BbhtConfig::default(), &mut rng, &ledger)
        })
    });
}

criterion_group!(engine, bench_planning, bench_run_grover, bench_run_bbht);
criterion_main!(engine);
