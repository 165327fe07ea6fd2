use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use randcirc_bench::{random_circuit, scrambled_state, scrambled_tableau};
use randcirc_core::markov::{exact_subset_transition_matrix, stationary_distribution};
use randcirc_core::spectral::spectral_gap;
use randcirc_core::{GateSet, QubitPartition, StateVector};

fn statevector(c: &mut Criterion) {
    let mut group = c.benchmark_group("statevector");
    for n in [8usize, 12, 16] {
        let circuit = random_circuit(n, 64, GateSet::Haar, 1);
        group.bench_with_input(BenchmarkId::new("apply_64_gates", n), &n, |b, &n| {
            b.iter(|| {
                let mut s = StateVector::zero(n).unwrap();
                for g in &circuit {
                    s.apply_gate(g).unwrap();
                }
                black_box(s)
            })
        });
    }
    for n in [8usize, 12] {
        let state = scrambled_state(n, 200, 2);
        let part = QubitPartition::first(n, n / 2).unwrap();
        group.bench_with_input(BenchmarkId::new("entropy", n), &n, |b, _| {
            b.iter(|| black_box(state.entanglement_entropy(&part).unwrap()))
        });
    }
    group.finish();
}

fn stabilizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("stabilizer");
    for n in [64usize, 256] {
        let circuit = random_circuit(n, 256, GateSet::Stabilizer, 3);
        let start = scrambled_tableau(n, 0, 0);
        group.bench_with_input(BenchmarkId::new("apply_256_gates", n), &n, |b, _| {
            b.iter(|| {
                let mut t = start.clone();
                for g in &circuit {
                    t.apply_clifford(g).unwrap();
                }
                black_box(t)
            })
        });
        let tab = scrambled_tableau(n, 20 * n, 4);
        let part = QubitPartition::first(n, n / 2).unwrap();
        group.bench_with_input(BenchmarkId::new("entropy", n), &n, |b, _| {
            b.iter(|| black_box(tab.stabilizer_entropy(&part).unwrap()))
        });
    }
    group.finish();
}

fn chain(c: &mut Criterion) {
    let mut group = c.benchmark_group("support_chain");
    group.sample_size(10);
    for n in [8usize, 10] {
        group.bench_with_input(BenchmarkId::new("build_q", n), &n, |b, &n| {
            b.iter(|| black_box(exact_subset_transition_matrix(n).unwrap()))
        });
        let q = exact_subset_transition_matrix(n).unwrap();
        let m = stationary_distribution(n).unwrap();
        group.bench_with_input(BenchmarkId::new("spectral_gap", n), &n, |b, _| {
            b.iter(|| black_box(spectral_gap(&q, &m).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, statevector, stabilizer, chain);
criterion_main!(benches);
