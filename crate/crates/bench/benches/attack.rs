use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use hbplus_core::{
    authenticate, break_hb_plus, AttackConfig, FaultableTag, KeyPair, ProtocolParams,
    RandomSource,
};

fn bench_authenticate(c: &mut Criterion) {
    let mut group = c.benchmark_group("authenticate");
    for k in [16usize, 64, 256] {
        let mut rng = RandomSource::new(1);
        let keys = KeyPair::random(k, &mut rng).unwrap();
        let params = ProtocolParams::new(k, 40, 0.125).unwrap();
        group.throughput(Throughput::Elements(40));
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            let mut label = 0u64;
            b.iter(|| {
                label += 1;
                authenticate(&keys, &keys, &params, rng.substream(label)).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_extraction(c: &mut Criterion) {
    let mut group = c.benchmark_group("break_hb_plus");
    group.sample_size(10);
    for k in [16usize, 32, 64] {
        let mut rng = RandomSource::new(2);
        let keys = KeyPair::random(k, &mut rng).unwrap();
        let params = ProtocolParams::new(k, 40, 0.125).unwrap();
        let config = AttackConfig::new(7, params).unwrap();
        group.throughput(Throughput::Elements(2 * k as u64 * 7));
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            let mut label = 0u64;
            b.iter(|| {
                label += 1;
                let mut tag = FaultableTag::new(&keys, 0.125).unwrap();
                break_hb_plus(&mut tag, &keys, &config, &rng.substream(label)).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_authenticate, bench_extraction);
criterion_main!(benches);
