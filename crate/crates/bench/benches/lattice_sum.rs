use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use latticebands::{lattice_sum, lattice_sum_1d, EwaldConfig};
use latticebands_bench::{alpha, beta};

fn sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice_sum");
    g.bench_function("closed_form_1d", |b| {
        b.iter(|| lattice_sum_1d(black_box(alpha()), black_box(0.17)).unwrap())
    });
    let cfg = EwaldConfig {
        generic_1d: true,
        ..Default::default()
    };
    for d in 1..=3 {
        let bm = beta(d);
        g.bench_with_input(BenchmarkId::new("generic", d), &d, |b, &d| {
            b.iter(|| lattice_sum(d, black_box(alpha()), &bm, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sums);
criterion_main!(benches);
