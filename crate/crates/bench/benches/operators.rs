use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use riemann_scatter_bench::{curves, quadrature_nodes, QUADRATURE_TRUNCATIONS, TRUNCATIONS};
use riemann_scatter_core::linalg::c64;
use riemann_scatter_core::scattering::build_scattering_genus0;
use riemann_scatter_core::schiffer::{build_blocks, Method};
use riemann_scatter_core::torus::{torus_identity_suite, weierstrass_p_lattice, TorusConfig};

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    for (label, cfg) in curves() {
        for n in TRUNCATIONS {
            group.bench_with_input(BenchmarkId::new(format!("{label}/series"), n), &n, |b, &n| {
                b.iter(|| build_blocks(black_box(&cfg), n, Method::Series, 0).unwrap())
            });
        }
        for n in QUADRATURE_TRUNCATIONS {
            let m = quadrature_nodes(n);
            group.bench_with_input(BenchmarkId::new(format!("{label}/quadrature"), n), &n, |b, &n| {
                b.iter(|| build_blocks(black_box(&cfg), n, Method::Quadrature, m).unwrap())
            });
        }
    }
    group.finish();
}

fn scattering(c: &mut Criterion) {
    let mut group = c.benchmark_group("scattering");
    for (label, cfg) in curves() {
        for n in TRUNCATIONS {
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, &n| {
                b.iter(|| build_scattering_genus0(black_box(&cfg), n).unwrap())
            });
        }
    }
    group.finish();
}

fn torus(c: &mut Criterion) {
    let cfg = TorusConfig::default();
    c.bench_function("torus/identity_suite", |b| {
        b.iter(|| torus_identity_suite(black_box(&cfg)).unwrap())
    });
    c.bench_function("torus/lattice_p", |b| {
        b.iter(|| weierstrass_p_lattice(black_box(c64(0.3, 0.2)), 64).unwrap())
    });
}

criterion_group!(benches, assembly, scattering, torus);
criterion_main!(benches);
