use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lojex_bench::*;
use lojex_core::*;

fn exponents(c: &mut Criterion) {
    let a = cusp_ideal();
    c.bench_function("exponent/cusp", |b| b.iter(|| lojasiewicz_exponent(black_box(&a)).unwrap()));
    let m = monomial_ideal(&[(7, 0), (4, 2), (1, 5), (0, 8)]);
    c.bench_function("exponent/monomial", |b| b.iter(|| lojasiewicz_exponent(black_box(&m)).unwrap()));
    c.bench_function("exponent/closure-oracle", |b| b.iter(|| exponent_via_closure(black_box(&m), 64, 4).unwrap()));
    c.bench_function("check-main/cusp-12x12", |b| b.iter(|| check_main_theorem(black_box(&a), 12, 12).unwrap()));
}

fn traces(c: &mut Criterion) {
    let nu = cusp_valuation();
    let q = CoeffField::rationals();
    c.bench_function("hn-trace/cusp-12", |b| b.iter(|| hn_trace(black_box(&nu), &q, &xy(), 12).unwrap()));
    let mono = Valuation::monomial(vec![vec![29, 30]]).unwrap();
    c.bench_function("hn-trace/mono-29-30", |b| b.iter(|| hn_trace(black_box(&mono), &q, &xy(), 64).unwrap()));
}

fn branches(c: &mut Criterion) {
    let f = three_branch_curve();
    c.bench_function("branches/three-branch", |b| b.iter(|| expand_branches(black_box(&f), 32).unwrap()));
}

fn integrality(c: &mut Criterion) {
    let a = cusp_ideal();
    let y4 = poly(&[(&[0, 4], 1)]);
    let y5 = poly(&[(&[0, 5], 1)]);
    let budget = Budget::default();
    c.bench_function("integral/y4-refuted", |b| b.iter(|| is_integral(black_box(&y4), &a, &budget)));
    c.bench_function("integral/y5", |b| b.iter(|| is_integral(black_box(&y5), &a, &budget)));
    c.bench_function("membership/y5", |b| b.iter(|| ideal_membership(black_box(&y5), &a, 32).unwrap()));
}

criterion_group!(benches, exponents, traces, branches, integrality);
criterion_main!(benches);
