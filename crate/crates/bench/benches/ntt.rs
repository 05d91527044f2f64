use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use omr_core::modring::{ntt_primes, Modulus, NttTables};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ntt(c: &mut Criterion) {
    let mut group = c.benchmark_group("ntt");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for log_n in [10u32, 12, 14, 16] {
        let n = 1usize << log_n;
        let q = ntt_primes(60, 1, n, &[]).unwrap()[0];
        let tables = NttTables::new(n, Modulus::new(q).unwrap()).unwrap();
        let mut data: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        group.bench_with_input(BenchmarkId::new("forward", n), &n, |b, _| {
            b.iter(|| tables.forward(black_box(&mut data)))
        });
        group.bench_with_input(BenchmarkId::new("inverse", n), &n, |b, _| {
            b.iter(|| tables.inverse(black_box(&mut data)))
        });
    }
    group.finish();
}

criterion_group!(benches, ntt);
criterion_main!(benches);
