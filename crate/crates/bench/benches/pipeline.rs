use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isopair_core::dilation::{reconstruct_and_certify, ReconstructOptions};
use isopair_core::iso::godic_lucenko_factor;
use isopair_core::moments::{taylor_moments_from_sampler, MeasureResolvent};
use isopair_core::pair::{verify_theorem_3_1, CommutingUnitaryPair};
use isopair_core::{generate, Instance, InstanceKind, InstanceSpec, SampleGrid};
use std::hint::black_box;

fn spec(kind: InstanceKind, dim: usize, big_dim: usize, grid_n: usize) -> InstanceSpec {
    InstanceSpec { seed: 7, dim, big_dim, grid_n, kind }
}

fn pair(dim: usize, big_dim: usize, grid_n: usize) -> CommutingUnitaryPair {
    match generate(&spec(InstanceKind::Pair, dim, big_dim, grid_n)).unwrap() {
        Instance::Pair { pair, .. } => pair,
        _ => unreachable!(),
    }
}

fn reconstruct(c: &mut Criterion) {
    let mut g = c.benchmark_group("reconstruct_and_certify");
    g.sample_size(10);
    let opts = ReconstructOptions::default();
    for n in [2, 4, 8] {
        let p = pair(2, 6, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| reconstruct_and_certify(p, n, n, &opts).unwrap())
        });
    }
    g.finish();
}

fn verify_pair(c: &mut Criterion) {
    let grid = SampleGrid::default();
    let p = pair(2, 8, 4);
    c.bench_function("verify_pair_resolvent", |b| b.iter(|| verify_theorem_3_1(&p, &grid)));
}

fn factor(c: &mut Criterion) {
    let mut g = c.benchmark_group("conjugation_factor");
    for big_dim in [4, 16, 64] {
        let p = pair(1, big_dim, 4);
        g.bench_with_input(BenchmarkId::from_parameter(big_dim), &p, |b, p| {
            b.iter(|| godic_lucenko_factor(black_box(p.u1())))
        });
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("taylor_moments");
    for n in [4, 16] {
        let Instance::Measure { measure, .. } = generate(&spec(InstanceKind::Measure, 1, 1, n)).unwrap() else {
            unreachable!()
        };
        let f = MeasureResolvent(measure);
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| taylor_moments_from_sampler(f, n, n).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, reconstruct, verify_pair, factor, moments);
criterion_main!(benches);
