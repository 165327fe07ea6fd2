//! Fixtures shared by the benchmarks.

use randcirc_core::gates::sample_gate_event;
use randcirc_core::{GateEvent, GateSet, RngStream, StabilizerTableau, StateVector};

/// A reproducible random circuit of `len` steps on `n` qubits.
pub fn random_circuit(n: usize, len: usize, gate_set: GateSet, seed: u64) -> Vec<GateEvent> {
    let mut rng = RngStream::new(seed, 0);
    (0..len)
        .map(|_| sample_gate_event(&mut rng, n, gate_set).expect("n >= 2"))
        .collect()
}

/// A statevector scrambled by `len` Haar steps.
pub fn scrambled_state(n: usize, len: usize, seed: u64) -> StateVector {
    let mut s = StateVector::zero(n).expect("supported size");
    for g in random_circuit(n, len, GateSet::Haar, seed) {
        s.apply_gate(&g).expect("in range");
    }
    s
}

/// A tableau scrambled by `len` stabilizer-set steps.
pub fn scrambled_tableau(n: usize, len: usize, seed: u64) -> StabilizerTableau {
    let mut t = StabilizerTableau::zero(n).expect("n >= 1");
    for g in random_circuit(n, len, GateSet::Stabilizer, seed) {
        t.apply_clifford(&g).expect("Clifford gates");
    }
    t
}
