//! Whole-packet episodes under each selection strategy.

use criterion::{criterion_group, criterion_main, Criterion};

use relaysim_core::engine::PacketSimulator;
use relaysim_core::protocol::Strategy;
use relaysim_core::SimConfig;

fn bench_packets(c: &mut Criterion) {
    let mut group = c.benchmark_group("packet");
    group.sample_size(20);
    for (name, strategy) in [
        ("opportunistic", Strategy::Opportunistic),
        ("harbinger", Strategy::Harbinger),
        ("p2p", Strategy::PointToPoint),
    ] {
        let cfg = SimConfig {
            strategy,
            ..SimConfig::default()
        };
        let sim = PacketSimulator::new(&cfg).unwrap();
        let mut idx = 0u64;
        group.bench_function(name, |b| {
            b.iter(|| {
                idx += 1;
                sim.run_packet(idx).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_packets);
criterion_main!(benches);
