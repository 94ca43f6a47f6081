use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coanalytic_bench::{polynomial, rational, symbols};
use coanalytic_core::decay::sample_class_f;
use coanalytic_core::mate::{normalize_nonextreme, pythagorean_mate};
use coanalytic_core::multipliers::numeric_mult_norm;
use coanalytic_core::rangespace::decompose;
use coanalytic_core::sections::preimage;
use coanalytic_core::shiftop::shift_section_norm;

fn bench_preimage(c: &mut Criterion) {
    let mut group = c.benchmark_group("preimage");
    for (name, a) in symbols() {
        for d in [64, 1024] {
            let f = polynomial(d);
            group.bench_with_input(BenchmarkId::new(name, d), &f, |b, f| {
                b.iter(|| preimage(&a, black_box(f)))
            });
        }
    }
    group.finish();
}

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for (name, a) in symbols() {
        let f = polynomial(32);
        group.bench_function(name, |b| b.iter(|| decompose(&a, black_box(&f)).unwrap()));
    }
    group.finish();
}

fn bench_shift_sections(c: &mut Criterion) {
    let mut group = c.benchmark_group("shift_section_norm");
    group.sample_size(10);
    let (_, a) = &symbols()[3];
    for n in [32, 256, 2048] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| shift_section_norm(a, n))
        });
    }
    group.finish();
}

fn bench_multiplier_sections(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiplier_section_norm");
    group.sample_size(10);
    let (_, a) = &symbols()[1];
    let psi = sample_class_f(1.0, 512).unwrap();
    for n in [64, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| numeric_mult_norm(a, a, &psi, n))
        });
    }
    group.finish();
}

fn bench_mate(c: &mut Criterion) {
    let mut group = c.benchmark_group("mate");
    let (a, _) = normalize_nonextreme(&rational(), 4096).unwrap();
    for m in [1024, 4096, 16384] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| pythagorean_mate(black_box(&a), m).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_preimage,
    bench_decompose,
    bench_shift_sections,
    bench_multiplier_sections,
    bench_mate
);
criterion_main!(benches);
