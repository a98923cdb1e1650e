use std::hint::black_box;

use casimir_core::modes::{self, Geometry};
use casimir_core::observables::{force_zero_t, free_energy, NumericsPolicy, ThermalState};
use casimir_core::riccati::riccati_table;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("riccati_table");
    for &(x, l) in &[(1.0, 100usize), (50.0, 500), (500.0, 2000)] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("x{x}_l{l}")),
            &(x, l),
            |b, &(x, l)| b.iter(|| riccati_table(black_box(x), black_box(l)).unwrap()),
        );
    }
    g.finish();
}

fn mode_terms(c: &mut Criterion) {
    c.bench_function("dlambda_dy l=40", |b| {
        b.iter(|| modes::dlambda_dy(black_box(40), black_box(9.0), black_box(10.0)).unwrap())
    });
}

fn observables(c: &mut Criterion) {
    let mut g = c.benchmark_group("force_zero_t");
    g.sample_size(10);
    for &rho in &[0.5, 0.9, 0.99] {
        let geom = Geometry::from_ratio(rho).unwrap();
        let p = NumericsPolicy::with_tol(1e-7);
        g.bench_with_input(BenchmarkId::from_parameter(rho), &geom, |b, geom| {
            b.iter(|| force_zero_t(geom, &p).unwrap())
        });
    }
    g.finish();

    let geom = Geometry::from_gap(50.0, 2.5).unwrap();
    let th = ThermalState::from_reduced(20.0, 50.0).unwrap();
    let p = NumericsPolicy::default();
    c.bench_function("free_energy t=20 xi=0.05", |b| {
        b.iter(|| free_energy(&geom, &th, &p).unwrap())
    });
}

criterion_group!(benches, tables, mode_terms, observables);
criterion_main!(benches);
