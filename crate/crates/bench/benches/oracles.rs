use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use purepair::extract::p5::{p5_chi_bound, P5Params};
use purepair::generators::{c5_join_power, gnp, path, random_h_free};
use purepair::oracles::{chromatic_number, clique_number, find_induced_copy};
use purepair::rational::q;

fn chromatic(c: &mut Criterion) {
    let mut grp = c.benchmark_group("chromatic_number");
    for n in [10, 14, 18] {
        let g = gnp(n, &q(1, 2), 7).unwrap();
        grp.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| chromatic_number(black_box(g)).unwrap()));
    }
    grp.finish();
}

fn clique(c: &mut Criterion) {
    let g = gnp(40, &q(1, 2), 7).unwrap();
    c.bench_function("clique_number/40", |b| b.iter(|| clique_number(black_box(&g))));
}

fn induced_copy(c: &mut Criterion) {
    let g = gnp(20, &q(1, 2), 11).unwrap();
    let h = path(5);
    c.bench_function("find_induced_p5/20", |b| b.iter(|| find_induced_copy(black_box(&h), black_box(&g), None).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let params = P5Params::default();
    let mut grp = c.benchmark_group("p5_chi_bound");
    let free = random_h_free(14, &q(1, 2), &path(5), 3, 2000).unwrap();
    grp.bench_function("h_free_14", |b| b.iter(|| p5_chi_bound(black_box(&free), &params)));
    let join = c5_join_power(2).unwrap();
    grp.bench_function("c5_join_2", |b| b.iter(|| p5_chi_bound(black_box(&join), &params)));
    grp.finish();
}

criterion_group!(benches, chromatic, clique, induced_copy, pipeline);
criterion_main!(benches);
