use acit_bench::fixture;
use acit_cli::gen::Kind;
use acit_core::{solve, AcitParams, Float, Rational, SampleRule};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn float_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_float_d3");
    group.sample_size(10);
    for kind in [Kind::Disjoint, Kind::Intersecting] {
        for n in [1000usize, 4000, 16000] {
            let f = fixture::<Float>(kind, 3, n, 7);
            let params = AcitParams::for_dimension(3, 7);
            group.throughput(Throughput::Elements(2 * n as u64));
            group.bench_with_input(BenchmarkId::new(kind.to_string(), n), &f, |b, f| {
                b.iter(|| solve(&f.points, &f.halfspaces, &params).unwrap())
            });
        }
    }
    group.finish();
}

fn exact_recursive(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_exact_recursive");
    group.sample_size(10);
    for d in [2usize, 3] {
        let f = fixture::<Rational>(Kind::Disjoint, d, 200, 3);
        let params = AcitParams::for_dimension(d, 3)
            .with_alpha_constant(d, 0.0)
            .with_sample_rule(SampleRule::Sqrt { factor: 1.0 })
            .with_invariant_checks(false);
        group.bench_with_input(BenchmarkId::from_parameter(d), &f, |b, f| {
            b.iter(|| solve(&f.points, &f.halfspaces, &params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, float_sweep, exact_recursive);
criterion_main!(benches);
