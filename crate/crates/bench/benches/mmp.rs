use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use surfmmp_core::bundled::{example_4_1, example_4_2, example_4_2_star};
use surfmmp_core::experiments::verify_smooth_starts;
use surfmmp_core::scenario::parse_rational;
use surfmmp_core::{classify, log_discrepancies, minimal_resolution, run, Strategy};

fn singularities(c: &mut Criterion) {
    let star = example_4_2_star();
    let state = star.build();
    let eps = parse_rational("1/7").unwrap();
    c.bench_function("classify quadruple fork", |b| {
        b.iter(|| classify(black_box(&state.surface), &state.boundary, &eps).unwrap())
    });
    c.bench_function("minimal resolution quadruple fork", |b| {
        b.iter(|| minimal_resolution(black_box(&state.surface)).unwrap())
    });
    let big = example_4_1(12, 12).build();
    c.bench_function("log discrepancies triple fork n=12", |b| {
        b.iter(|| log_discrepancies(black_box(&big.surface), &big.boundary).unwrap())
    });
}

fn program(c: &mut Criterion) {
    let s = example_4_2();
    let state = s.build();
    c.bench_function("run quadruple fork pair", |b| {
        b.iter(|| run(black_box(&state), &Strategy::MostNegativeFirst, &s.epsilon).unwrap())
    });
    let eps = parse_rational("1/4").unwrap();
    let mut g = c.benchmark_group("verification");
    g.sample_size(10);
    g.bench_function("smooth starts x16", |b| b.iter(|| verify_smooth_starts(16, 7, &eps, 8).unwrap()));
    g.finish();
}

criterion_group!(benches, singularities, program);
criterion_main!(benches);
