use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pgal_bench::{grid, pow2_pair, sinh_pair};
use pgal_core::homothetical::audit::AuditOptions;
use pgal_core::{audit_case, eigen_fit, laplacian_ii, ParamSet};

fn pointwise(c: &mut Criterion) {
    let patch = pow2_pair().patch();
    c.bench_function("frame/pow2", |b| {
        b.iter(|| patch.frame(black_box(1.2), black_box(0.9)))
    });
    c.bench_function("laplacian_ii/pow2", |b| {
        b.iter(|| laplacian_ii(&patch, black_box(1.2), black_box(0.9)))
    });
    let patch = sinh_pair().patch();
    c.bench_function("laplacian_ii/sinh", |b| {
        b.iter(|| laplacian_ii(&patch, black_box(1.2), black_box(0.3)))
    });
}

fn grids(c: &mut Criterion) {
    let patch = pow2_pair().patch();
    let mut group = c.benchmark_group("eigen_fit");
    for n in [10, 40] {
        let g = grid(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| eigen_fit(&patch, g))
        });
    }
    group.finish();
}

fn audits(c: &mut Criterion) {
    let params = ParamSet::new();
    let opts = AuditOptions::default();
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    for case in ["I.2", "III.3", "I.6"] {
        group.bench_function(case, |b| b.iter(|| audit_case(case, &params, &opts)));
    }
    group.finish();
}

criterion_group!(benches, pointwise, grids, audits);
criterion_main!(benches);
