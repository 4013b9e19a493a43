use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use galmub_bench::spaces;
use galmub_core::acceptance::g0_matrix;
use galmub_core::gl2::cycler_generator;
use galmub_core::gunitary::{invariant_vector, make_gunitary};
use galmub_core::mub::{build_mub, check_unbiasedness};
use galmub_core::polytope::{phase_points, stabilizer_census, wigner_of_state};
use galmub_core::GL2Mat;

fn field_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("field_mul");
    for s in spaces() {
        let f = s.field();
        let elems: Vec<_> = f.elements().collect();
        group.bench_with_input(BenchmarkId::from_parameter(s.d()), &elems, |b, elems| {
            b.iter(|| {
                let mut acc = f.from_int(1);
                for &x in elems.iter().skip(1) {
                    acc = f.mul(acc, x);
                }
                black_box(acc)
            })
        });
    }
    group.finish();
}

fn metaplectic(c: &mut Criterion) {
    let mut group = c.benchmark_group("metaplectic");
    group.sample_size(20);
    for s in spaces().into_iter().filter(|s| s.d() <= 11) {
        let g = GL2Mat::from_ints(s.field(), 1, 1, 1, 2);
        group.bench_function(BenchmarkId::from_parameter(s.d()), |b| {
            b.iter(|| black_box(s.metaplectic(&g).unwrap()))
        });
    }
    group.finish();
}

fn invariant(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariant_vector");
    group.sample_size(10);
    for s in spaces().into_iter().filter(|s| s.n() % 2 == 1 && s.d() <= 11) {
        let gu = make_gunitary(&s, &cycler_generator(s.field(), &s.extension()).unwrap()).unwrap();
        group.bench_function(BenchmarkId::from_parameter(s.d()), |b| {
            b.iter(|| black_box(invariant_vector(&s, &gu).unwrap()))
        });
        group.bench_function(BenchmarkId::new("g0_matrix", s.d()), |b| {
            b.iter(|| black_box(g0_matrix(&s).unwrap()))
        });
    }
    group.finish();
}

fn mub_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("mub_grid");
    group.sample_size(10);
    for s in spaces().into_iter().filter(|s| s.d() <= 11) {
        group.bench_function(BenchmarkId::from_parameter(s.d()), |b| {
            b.iter(|| {
                let mub = build_mub(&s);
                black_box(check_unbiasedness(&s, &mub).unwrap())
            })
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for s in spaces().into_iter().filter(|s| s.d() % 4 == 3 && s.d() <= 11) {
        let g0 = cycler_generator(s.field(), &s.extension()).unwrap();
        let psi = invariant_vector(&s, &make_gunitary(&s, &g0).unwrap()).unwrap().psi;
        let w = wigner_of_state(&s, &phase_points(&s), &psi).unwrap();
        group.bench_function(BenchmarkId::from_parameter(s.d()), |b| {
            b.iter(|| black_box(stabilizer_census(&s, &w)))
        });
    }
    group.finish();
}

criterion_group!(benches, field_mul, metaplectic, invariant, mub_grid, census);
criterion_main!(benches);
