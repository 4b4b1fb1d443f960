//! Codec-level benchmarks: the Viterbi decoder dominates campaign runtime,
//! with Reed-Solomon decoding far behind.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use relaysim_core::fec::{viterbi_decode, CodeChain, RS_K, RS_N, RS_T};

fn bench_viterbi(c: &mut Criterion) {
    let chain = CodeChain::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("viterbi");
    for rate_idx in [0usize, 4] {
        let mut llrs = vec![0.0f64; chain.mother_len()];
        for &p in chain.positions(rate_idx) {
            llrs[p as usize] = rng.sample::<f64, _>(rand_distr::StandardNormal);
        }
        let (num, den) = chain.family.rate(rate_idx);
        group.bench_function(format!("rate_{num}_{den}"), |b| {
            b.iter(|| viterbi_decode(std::hint::black_box(&llrs), &chain.conv))
        });
    }
    group.finish();
}

fn bench_rs(c: &mut Criterion) {
    let chain = CodeChain::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut payload = [0u8; RS_K];
    rng.fill(&mut payload[..]);
    let word = chain.rs.encode(&payload);
    let mut corrupted = word;
    let mut positions: Vec<usize> = (0..RS_N).collect();
    positions.shuffle(&mut rng);
    for &p in &positions[..RS_T] {
        corrupted[p] ^= rng.gen_range(1..=255u8);
    }
    let mut group = c.benchmark_group("reed_solomon");
    group.bench_function("decode_clean", |b| {
        b.iter(|| chain.rs.decode(std::hint::black_box(&word)))
    });
    group.bench_function("decode_8_errors", |b| {
        b.iter(|| chain.rs.decode(std::hint::black_box(&corrupted)))
    });
    group.finish();
}

criterion_group!(benches, bench_viterbi, bench_rs);
criterion_main!(benches);
