use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use omssc::algorithms::{
    expected_access, greedy_rounding, Mae, MwuState, OnlineAlgorithm,
};
use omssc::{kendall_tau, PermTable, Permutation, RequestSet};

fn bench_kendall(c: &mut Criterion) {
    let a = Permutation::from_order((1..=64).collect()).unwrap();
    let b = Permutation::from_order((1..=64).rev().collect()).unwrap();
    c.bench_function("kendall_tau n=64", |bench| {
        bench.iter(|| kendall_tau(black_box(&a), black_box(&b)).unwrap())
    });
}

fn bench_mae(c: &mut Criterion) {
    let s = RequestSet::new(vec![30, 45, 60], 64).unwrap();
    c.bench_function("mae step n=64 r=3", |bench| {
        bench.iter(|| {
            let mut alg = Mae::new(Permutation::identity(64));
            alg.serve(black_box(&s)).unwrap()
        })
    });
}

fn bench_mwu(c: &mut Criterion) {
    let table = Arc::new(PermTable::new(7).unwrap());
    let s = RequestSet::new(vec![3, 6], 7).unwrap();
    c.bench_function("mwu update+distribution n=7", |bench| {
        let mut state = MwuState::new(Arc::clone(&table));
        bench.iter(|| {
            state.update(black_box(&s)).unwrap();
            let d = state.distribution();
            expected_access(&d, &s).unwrap()
        })
    });
}

fn bench_rounding(c: &mut Criterion) {
    let table = Arc::new(PermTable::new(7).unwrap());
    let mut state = MwuState::new(Arc::clone(&table));
    for e in 1..=7u32 {
        state
            .update(&RequestSet::new(vec![e, e % 7 + 1], 7).unwrap())
            .unwrap();
    }
    let d = state.distribution();
    c.bench_function("greedy_rounding n=7 r=2", |bench| {
        bench.iter(|| greedy_rounding(black_box(&d), 2).unwrap())
    });
}

criterion_group!(benches, bench_kendall, bench_mae, bench_mwu, bench_rounding);
criterion_main!(benches);
