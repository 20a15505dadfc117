//! Compares the rayon-backed per-source loops against the sequential
//! fallback. Run `cargo bench` for the parallel numbers (default features)
//! and `cargo bench --no-default-features` for the sequential ones; the
//! benchmark ids carry the active mode so reports line up side by side.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use clanforge::centrality::betweenness;
use clanforge::metrics::{average_shortest_path, connected_components, PathMode};
use clanforge::synth::generate_uniform;

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn bench_betweenness(c: &mut Criterion) {
    let mut group = c.benchmark_group("betweenness");
    for &n in &[500usize, 1000, 2000] {
        let g = generate_uniform(n, 3 * n, 1).unwrap();
        group.bench_with_input(BenchmarkId::new(mode(), n), &g, |b, g| {
            b.iter(|| betweenness(g, false))
        });
    }
    group.finish();
}

fn bench_average_path(c: &mut Criterion) {
    let mut group = c.benchmark_group("average_shortest_path");
    for &n in &[1000usize, 2000, 4000] {
        let g = generate_uniform(n, 3 * n, 1).unwrap();
        let largest = connected_components(&g).largest_nodes;
        group.bench_with_input(BenchmarkId::new(mode(), n), &g, |b, g| {
            b.iter(|| average_shortest_path(g, &largest, PathMode::Exact).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_betweenness, bench_average_path);
criterion_main!(benches);
