use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latticebands::{band_sweep, bz_path};
use latticebands_bench::params;

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("band_sweep");
    g.sample_size(10);
    let paths: [(usize, &[&str]); 3] = [
        (1, &["-X", "G", "X"]),
        (2, &["G", "X", "M", "G"]),
        (3, &["G", "X", "M", "G", "R"]),
    ];
    for (d, names) in paths {
        let path = bz_path(d, names, 21).unwrap();
        let p = params(d);
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| band_sweep(&path, &p).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
