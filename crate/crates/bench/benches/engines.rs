//! Timings for the geometry, gravity page and Cotor engines.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gravity_core::{
    binomial_coalgebra, build_e1, compute_e2, cotor, gen_random_config, gravity_degree, skewer_degree, Fp, GravityBox,
    SphereWedge,
};

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("gravity_degree");
    for j in [4, 8, 12] {
        let configs: Vec<_> = (0..16).map(|seed| gen_random_config(2, j, seed).unwrap()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(j), &configs, |b, configs| {
            b.iter(|| configs.iter().map(|cfg| gravity_degree(black_box(cfg))).sum::<usize>())
        });
    }
    group.finish();
    c.bench_function("skewer_degree/12", |b| {
        let cfg = gen_random_config(2, 12, 0).unwrap();
        b.iter(|| skewer_degree(black_box(&cfg)))
    });
}

fn pages(c: &mut Criterion) {
    let mut group = c.benchmark_group("e2_page");
    group.sample_size(10);
    for (name, x, bounds) in [
        (
            "S1",
            vec![1],
            GravityBox {
                max_s: 6,
                max_degree: 14,
                max_weight: 6,
            },
        ),
        (
            "S1vS2",
            vec![1, 2],
            GravityBox {
                max_s: 4,
                max_degree: 12,
                max_weight: 4,
            },
        ),
    ] {
        let wedge = SphereWedge::new(x).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| compute_e2(&build_e1(black_box(&wedge), 3, bounds).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn cotor_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("cotor");
    group.sample_size(10);
    let coalgebra = binomial_coalgebra(Fp::new(2).unwrap(), 2, 8).unwrap();
    for max_s in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::new("binomial", max_s), &max_s, |b, &s| {
            b.iter(|| cotor(black_box(&coalgebra), s, 16))
        });
    }
    group.finish();
}

criterion_group!(benches, geometry, pages, cotor_tables);
criterion_main!(benches);
