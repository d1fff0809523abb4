use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latticebands::{
    evolve_wavepacket, BandSource, DynamicsOptions, InitialState, TimeGrid, TimeUnit,
};
use latticebands_bench::params;

fn wavepacket(c: &mut Criterion) {
    let mut g = c.benchmark_group("wavepacket");
    g.sample_size(10);
    let times = TimeGrid::linspace(10.0, 10, TimeUnit::Gamma0Tau).unwrap();
    for (d, n) in [(1usize, 256usize), (2, 64), (3, 32)] {
        let p = params(d);
        let opt = DynamicsOptions {
            window: n / 2,
            band: BandSource::PoleApproximation,
            refine_check: false,
        };
        g.bench_with_input(BenchmarkId::new("point_source", d), &n, |b, &n| {
            b.iter(|| evolve_wavepacket(&p, n, &times, &InitialState::PointSource, &opt).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, wavepacket);
criterion_main!(benches);
