//! Sequential vs data-parallel execution of the main sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use graphheat::asymptotics::{estimate_pairs, verify_graph_with, EstimateOptions};
use graphheat::corpus;
use graphheat::heat_kernel::{
    kernel_uniformization_with, kernels_at, Method, UniformizationSampler, DEFAULT_EPS,
};
use graphheat::linalg::Matrix;
use graphheat::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn matmul(c: &mut Criterion) {
    let a = Matrix::from_fn(200, |i, j| ((i * 7 + j * 3) % 11) as f64 / 11.0);
    let mut group = c.benchmark_group("matmul_200");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(a.matmul_with(&a, exec))));
    }
    group.finish();
}

fn uniformization(c: &mut Criterion) {
    let g = corpus::random_connected(&mut corpus::rng(1), 100, 0.05);
    let mut group = c.benchmark_group("uniformization_n100_t1");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(kernel_uniformization_with(&g, 1.0, DEFAULT_EPS, exec).unwrap()))
        });
    }
    group.finish();
}

fn kernels_over_times(c: &mut Criterion) {
    let g = corpus::grid(6, 6);
    let times: Vec<f64> = (1..=16).map(|i| i as f64 * 0.125).collect();
    let mut group = c.benchmark_group("kernels_at_16_times");
    for method in [Method::Spectral, Method::Uniformization] {
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(method.to_string(), name),
                &exec,
                |b, &exec| {
                    b.iter(|| black_box(kernels_at(&g, &times, method, DEFAULT_EPS, exec).unwrap()))
                },
            );
        }
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let g = corpus::random_connected(&mut corpus::rng(2), 40, 0.1);
    let mut group = c.benchmark_group("verify_graph_n40");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(verify_graph_with(&g, exec))));
    }
    group.finish();
}

fn estimation(c: &mut Criterion) {
    let g = corpus::random_tree(&mut corpus::rng(3), 20);
    let sampler = UniformizationSampler::new(&g);
    let opts = EstimateOptions::for_graph(&g);
    let pairs: Vec<(usize, usize)> = (0..20)
        .flat_map(|x| (x + 1..20).map(move |y| (x, y)))
        .collect();
    let mut group = c.benchmark_group("estimate_tree_n20");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(estimate_pairs(&sampler, &pairs, opts, exec)))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    matmul,
    uniformization,
    kernels_over_times,
    verification,
    estimation
);
criterion_main!(benches);
