//! Parallel vs sequential throughput on the two work profiles that dominate
//! real runs: many cheap field evaluations across a grid, and fewer but
//! heavier residual evaluations.  `par::map` picks up the `parallel` feature;
//! `par::map_seq` is always the plain loop, so the two series can be compared
//! within a single build.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use toda_core::cartan::{build_cartan, exponent_data, ResonanceMode};
use toda_core::grid::GridSpec;
use toda_core::par;
use toda_core::rat;
use toda_core::solution::{build_solution, CoefficientSpec, TodaParams, TodaSolution};

fn sample_solution() -> TodaSolution {
    let cartan = build_cartan(2).unwrap();
    let expo =
        exponent_data(cartan, vec![rat::rat_i64(1), rat::rat_i64(0)], ResonanceMode::Exact)
            .unwrap();
    let mut params = TodaParams::canonical(expo);
    params.c = vec![CoefficientSpec { i: 2, j: 0, value: Complex64::new(0.4, -0.3) }];
    build_solution(params.resolve().unwrap())
}

fn bench_field_grid(c: &mut Criterion) {
    let sol = sample_solution();
    let points = GridSpec { r0: 1e-2, r1: 1e2, nr: 24, ntheta: 48 }.points();
    let mut group = c.benchmark_group("field_grid");
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let v = par::map(black_box(&points), |&z| sol.u(1, z) + sol.u(2, z));
            black_box(v)
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let v = par::map_seq(black_box(&points), |&z| sol.u(1, z) + sol.u(2, z));
            black_box(v)
        })
    });
    group.finish();
}

fn bench_residual_grid(c: &mut Criterion) {
    let sol = sample_solution();
    let points = GridSpec::default().points();
    let mut group = c.benchmark_group("residual_grid");
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let v = par::map(black_box(&points), |&z| {
                (1..=sol.n()).map(|i| sol.pde_residual(i, z).normalized).sum::<f64>()
            });
            black_box(v)
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let v = par::map_seq(black_box(&points), |&z| {
                (1..=sol.n()).map(|i| sol.pde_residual(i, z).normalized).sum::<f64>()
            });
            black_box(v)
        })
    });
    group.finish();
}

criterion_group!(benches, bench_field_grid, bench_residual_grid);
criterion_main!(benches);
