use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rhomboid_core::{build_sr, check_exact, check_fingerprint, generate, recurrence_table, PrimeField};

pub fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    for n in [10, 64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| generate(black_box(n)))
        });
    }
    group.finish();
}

pub fn oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let (e, g) = (generate(10).unwrap(), build_sr(10).unwrap());
    group.bench_function("exact/10", |b| b.iter(|| check_exact(&e, &g, 1 << 22)));
    for n in [64, 128] {
        let (e, g) = (generate(n).unwrap(), build_sr(n).unwrap());
        group.bench_with_input(BenchmarkId::new("fingerprint", n), &n, |b, _| {
            b.iter(|| check_fingerprint(&e, &g, 10, 42, PrimeField::default()))
        });
    }
    group.finish();
}

pub fn recurrences(c: &mut Criterion) {
    c.bench_function("recurrence_table/1024", |b| {
        b.iter(|| recurrence_table(black_box(1024)))
    });
}

criterion_group!(benches, generation, oracles, recurrences);
criterion_main!(benches);
