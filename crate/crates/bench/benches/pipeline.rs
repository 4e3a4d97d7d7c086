use criterion::{criterion_group, criterion_main, Criterion};
use diskdiag::enumerate::tree_census;
use diskdiag::{fixtures, is_delta_graph, level_set, realize, Budget, RealizeOptions};
use diskdiag_bench::sample_graphs;
use std::hint::black_box;

fn checks(c: &mut Criterion) {
    let graphs = sample_graphs(20, 48);
    c.bench_function("is_delta_graph/corpus20", |b| {
        b.iter(|| graphs.iter().filter(|g| is_delta_graph(g, Budget::default()).unwrap().delta).count())
    });
}

fn realization(c: &mut Criterion) {
    let graphs = sample_graphs(10, 48);
    c.bench_function("realize/corpus10", |b| {
        b.iter(|| {
            graphs
                .iter()
                .map(|g| realize(g, RealizeOptions::default()).unwrap().function.face_maps.len())
                .sum::<usize>()
        })
    });
    let f = realize(&fixtures::g3(), RealizeOptions::default()).unwrap().function;
    c.bench_function("level_set/g3_res64", |b| b.iter(|| level_set(&f, black_box(2.5), 64).len()));
    c.bench_function("evaluate/g3_grid", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..32 {
                for j in 0..32 {
                    let p = [-0.7 + 1.4 * i as f64 / 31.0, -0.7 + 1.4 * j as f64 / 31.0];
                    acc += f.evaluate(p).unwrap();
                }
            }
            acc
        })
    });
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("tree_census");
    group.sample_size(10);
    group.bench_function("max6", |b| b.iter(|| tree_census(black_box(6)).unwrap().instances));
    group.finish();
}

criterion_group!(benches, checks, realization, census);
criterion_main!(benches);
