use acit_bench::fixture;
use acit_cli::gen::Kind;
use acit_core::smalllp::{closest_pair_vh_incremental, deep_interior_point, solve_lp};
use acit_core::{Float, Scalar};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("seidel_lp_d3");
    for n in [1000usize, 8000] {
        let f = fixture::<Float>(Kind::Intersecting, 3, n, 11);
        let objective = vec![Float::one(), Float::from_f64(0.3), Float::from_f64(-0.2)];
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("solve_lp", n), &f, |b, f| b.iter(|| solve_lp(&objective, &f.halfspaces, 5)));
        group.bench_with_input(BenchmarkId::new("interior", n), &f, |b, f| {
            b.iter(|| deep_interior_point(&f.halfspaces, 3, None))
        });
    }
    group.finish();
}

fn closest_pair(c: &mut Criterion) {
    let mut group = c.benchmark_group("closest_pair_d3");
    group.sample_size(20);
    for n in [1000usize, 8000] {
        let f = fixture::<Float>(Kind::Disjoint, 3, n, 13);
        group.throughput(Throughput::Elements(2 * n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| closest_pair_vh_incremental(&f.points, &f.halfspaces, 5).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lp, closest_pair);
criterion_main!(benches);
