//! The Markov chain on Pauli supports.
//!
//! Under the random circuit the expected squared Pauli coefficients of the
//! state form a distribution over strings that evolves as a Markov chain;
//! its projection onto supports `S(n)` is again a Markov chain. The empty
//! support is an isolated atom of fixed weight `2^{-N}`, and on the remaining
//! space `Ω` (nonempty subsets, indexed by `bits - 1`) the chain is ergodic
//! with stationary law `M(S) = 3^{|S|} / (4^N - 1)`.
//!
//! Exact matrices store integer numerators over `9·N(N−1)`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::sample_pair;
use crate::matrix::{DistributionVector, TransitionMatrix};
use crate::partition::QubitPartition;
use crate::pauli::{
    cnot_conjugate, local_rule_table, OccupationPair, Pauli, PauliPair, PauliString,
};
use crate::rng::RngStream;
use crate::statevector::StateVector;
use crate::stats::Estimate;
use crate::subset::SubsetState;

/// Largest `N` for which the exact subset chain is built.
pub const MAX_EXACT_SUBSET_QUBITS: usize = 14;
/// Largest `N` for the full `4^N` coefficient chain.
pub const MAX_FULL_CHAIN_QUBITS: usize = 5;

/// `|Ω| = 2^N − 1`.
pub fn omega_size(n: usize) -> usize {
    (1usize << n) - 1
}

pub fn omega_index(bits: u64) -> usize {
    bits as usize - 1
}

pub fn omega_bits(index: usize) -> u64 {
    index as u64 + 1
}

/// Common denominator of exact chain entries.
pub fn chain_denominator(n: usize) -> u64 {
    9 * (n * (n - 1)) as u64
}

fn check_exact_size(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    if n > limit {
        return Err(Error::TooManyQubits {
            what,
            n_qubits: n,
            limit,
        });
    }
    Ok(())
}

/// Squared Pauli weights of a computational basis state, projected onto
/// supports: uniform `2^{-N}` on every subset (indexed by its bit mask).
pub fn initial_subset_distribution(n: usize, basis_index: usize) -> Result<DistributionVector> {
    if n == 0 || n > 24 {
        return Err(Error::InvalidArgument(format!(
            "unsupported register size {n}"
        )));
    }
    if basis_index >= 1 << n {
        return Err(Error::InvalidArgument(format!(
            "basis index {basis_index} >= 2^{n}"
        )));
    }
    // Z-type strings carry all the weight: ±2^{-N/2} on each of the 2^N subsets
    DistributionVector::new(vec![(0.5f64).powi(n as i32); 1 << n])
}

/// Support distribution of an arbitrary state via its Pauli expansion.
pub fn subset_distribution_of(state: &StateVector) -> Result<DistributionVector> {
    let coeffs = state.pauli_coefficients()?;
    let n = state.n_qubits();
    let mut out = vec![0.0; 1 << n];
    for (p, v) in coeffs.values().iter().enumerate() {
        out[support_bits_of_index(n, p) as usize] += v * v;
    }
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= total);
    DistributionVector::new(out)
}

fn support_bits_of_index(n: usize, p: usize) -> u64 {
    (0..n)
        .filter(|k| (p >> (2 * k)) & 3 != 0)
        .fold(0, |m, k| m | 1 << k)
}

/// Draw a subset from the support distribution of `|0…0⟩`.
pub fn sample_initial_subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SubsetState {
    let mut s = SubsetState::empty(n);
    for k in 0..n {
        if rng.random::<bool>() {
            s.insert(k);
        }
    }
    s
}

/// One step of the support chain: pick an ordered pair, then resample the
/// pair's occupation from the local rule.
pub fn subset_chain_step<R: Rng + ?Sized>(s: &mut SubsetState, rng: &mut R) {
    let n = s.n_qubits();
    let (c, t) = sample_pair(rng, n);
    let occ = OccupationPair::new(s.contains(c), s.contains(t));
    if occ.code() == 0 {
        return;
    }
    let row = &local_rule_table()[occ.code()];
    let mut u = rng.random_range(0..9u32);
    let mut outcome = 0;
    for (code, &w) in row.iter().enumerate() {
        if u < w {
            outcome = code;
            break;
        }
        u -= w;
    }
    let next = OccupationPair::from_code(outcome);
    s.set(c, next.control);
    s.set(t, next.target);
}

/// Transition matrix of the support chain on `Ω`.
pub fn exact_subset_transition_matrix(n: usize) -> Result<TransitionMatrix> {
    check_exact_size("exact_subset_transition_matrix", n, MAX_EXACT_SUBSET_QUBITS)?;
    let table = local_rule_table();
    let rows = (1u64..1 << n)
        .into_par_iter()
        .map(|s| {
            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
            for c in 0..n {
                for t in (0..n).filter(|&t| t != c) {
                    let occ = OccupationPair::new(s >> c & 1 == 1, s >> t & 1 == 1);
                    for (code, &w) in table[occ.code()].iter().enumerate().filter(|(_, &w)| w > 0) {
                        let o = OccupationPair::from_code(code);
                        let mut s2 = s & !(1 << c) & !(1 << t);
                        s2 |= u64::from(o.control) << c | u64::from(o.target) << t;
                        *acc.entry(omega_index(s2)).or_default() += u64::from(w);
                    }
                }
            }
            acc.into_iter().collect()
        })
        .collect();
    Ok(TransitionMatrix::from_integer_rows(
        chain_denominator(n),
        rows,
    ))
}

/// Unnormalized stationary weights `3^{|S|}` on `Ω`.
pub fn stationary_weights(n: usize) -> Vec<u64> {
    (1u64..1 << n).map(|s| 3u64.pow(s.count_ones())).collect()
}

/// `M(S) = 3^{|S|} / (4^N − 1)` on `Ω`.
pub fn stationary_distribution(n: usize) -> Result<DistributionVector> {
    if n == 0 || n > 26 {
        return Err(Error::InvalidArgument(format!(
            "unsupported register size {n}"
        )));
    }
    let den = 4f64.powi(n as i32) - 1.0;
    DistributionVector::new(
        (1u64..1 << n)
            .map(|s| 3f64.powi(s.count_ones() as i32) / den)
            .collect(),
    )
}

/// `Σ_{∅≠S⊆A} M(S) = (4^{N_A} − 1)/(4^N − 1)`.
pub fn stationary_mass_inside(n: usize, n_a: usize) -> f64 {
    (4f64.powi(n_a as i32) - 1.0) / (4f64.powi(n as i32) - 1.0)
}

/// Expected purity `2^{N_B} · Pr[S ⊆ A]` (the probability includes `∅`).
pub fn purity_from_containment(prob_subset_of_a: f64, n_b: usize) -> f64 {
    (2f64).powi(n_b as i32) * prob_subset_of_a
}

/// `Σ_{S⊆A, S≠∅} p(S)` for a distribution on `Ω`.
pub fn containment_on_omega(p: &[f64], a_mask: u64) -> f64 {
    p.iter()
        .enumerate()
        .filter(|(i, _)| omega_bits(*i) & !a_mask == 0)
        .map(|(_, v)| v)
        .sum()
}

/// Exact propagation of the support chain started from `|0…0⟩`.
#[derive(Clone, Debug)]
pub struct ExactSubsetChain {
    n: usize,
    q: TransitionMatrix,
}

impl ExactSubsetChain {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            q: exact_subset_transition_matrix(n)?,
        })
    }

    pub fn from_matrix(n: usize, q: TransitionMatrix) -> Result<Self> {
        if q.n_states() != omega_size(n) {
            return Err(Error::DimensionMismatch(q.n_states(), omega_size(n)));
        }
        Ok(Self { n, q })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.q
    }

    /// Initial (unnormalized, total `1 − 2^{-N}`) mass on `Ω`.
    pub fn initial_omega_mass(&self) -> Vec<f64> {
        vec![(0.5f64).powi(self.n as i32); omega_size(self.n)]
    }

    /// `Pr[S(n) ⊆ A]` including the `∅` atom, at each step of the sorted
    /// schedule.
    pub fn containment_series(&self, part: &QubitPartition, steps: &[usize]) -> Result<Vec<f64>> {
        check_schedule(steps)?;
        let mask = part.a_mask();
        let empty = (0.5f64).powi(self.n as i32);
        let mut p = self.initial_omega_mass();
        let mut at = 0;
        let mut out = Vec::with_capacity(steps.len());
        for &s in steps {
            while at < s {
                p = self.q.step(&p);
                at += 1;
            }
            out.push(empty + containment_on_omega(&p, mask));
        }
        Ok(out)
    }

    /// Exact `E[Tr ρ_A²]` at each step of the schedule.
    pub fn purity_series(&self, part: &QubitPartition, steps: &[usize]) -> Result<Vec<f64>> {
        Ok(self
            .containment_series(part, steps)?
            .into_iter()
            .map(|c| purity_from_containment(c, part.n_b()))
            .collect())
    }
}

pub(crate) fn check_schedule(steps: &[usize]) -> Result<()> {
    if steps.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "step schedule must be sorted".into(),
        ));
    }
    Ok(())
}

/// Monte Carlo estimate of `Pr[S(n) ⊆ A]` from `trials` trajectories.
pub fn estimate_containment(
    part: &QubitPartition,
    n_steps: usize,
    trials: usize,
    seed: u64,
) -> Result<Estimate> {
    Ok(containment_trajectories(part, &[n_steps], trials, seed)?.remove(0))
}

/// Containment estimates at every step of a sorted schedule.
pub fn containment_trajectories(
    part: &QubitPartition,
    steps: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    check_schedule(steps)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = part.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    let a = part.a_subset();
    let hits: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i);
            let mut s = sample_initial_subset(&mut rng, n);
            let mut at = 0;
            steps
                .iter()
                .map(|&target| {
                    while at < target {
                        subset_chain_step(&mut s, &mut rng);
                        at += 1;
                    }
                    if s.is_subset_of(&a) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Ok((0..steps.len())
        .map(|k| {
            let col: Vec<f64> = hits.iter().map(|h| h[k]).collect();
            Estimate::from_samples(&col)
        })
        .collect())
}

/// The full coefficient chain on `{I,X,Y,Z}^N`, indexed by
/// [`PauliString::index`]. The identity string is absorbing.
pub fn exact_full_chain_matrix(n: usize) -> Result<TransitionMatrix> {
    check_exact_size("exact_full_chain_matrix", n, MAX_FULL_CHAIN_QUBITS)?;
    let rows = (0..1usize << (2 * n))
        .into_par_iter()
        .map(|q| {
            let base = PauliString::from_index(n, q);
            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
            for c in 0..n {
                for t in (0..n).filter(|&t| t != c) {
                    let twirl = |p: Pauli| -> &'static [Pauli] {
                        if p.is_identity() {
                            &[Pauli::I]
                        } else {
                            &Pauli::NON_IDENTITY
                        }
                    };
                    let (lc, lt) = (twirl(base.get(c)), twirl(base.get(t)));
                    let w = 9 / (lc.len() * lt.len()) as u64;
                    for &hc in lc {
                        for &ht in lt {
                            let img = cnot_conjugate(PauliPair::new(hc, ht));
                            let mut p = base.clone();
                            p.set(c, img.control);
                            p.set(t, img.target);
                            *acc.entry(p.index()).or_default() += w;
                        }
                    }
                }
            }
            acc.into_iter().collect()
        })
        .collect();
    Ok(TransitionMatrix::from_integer_rows(
        chain_denominator(n),
        rows,
    ))
}

/// Marginal of a distribution on strings over supports (indexed by mask).
pub fn project_to_supports(n: usize, p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 1 << n];
    for (q, v) in p.iter().enumerate() {
        out[support_bits_of_index(n, q) as usize] += v;
    }
    out
}

/// `subset_bits,probability` rows.
pub fn distribution_csv(p: &[f64], omega: bool) -> String {
    let mut out = String::from("subset_bits,probability\n");
    for (i, v) in p.iter().enumerate() {
        let bits = if omega { omega_bits(i) } else { i as u64 };
        out.push_str(&format!("{bits},{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{sample_gate_event, GateSet};

    #[test]
    fn initial_distribution_examples() {
        let d = initial_subset_distribution(2, 0).unwrap();
        assert_eq!(d.as_slice(), &[0.25; 4]);
        let d = initial_subset_distribution(1, 1).unwrap();
        assert_eq!(d.as_slice(), &[0.5, 0.5]);
        for n in 1..10 {
            let d = initial_subset_distribution(n, 0).unwrap();
            assert_eq!(d.as_slice()[0], (0.5f64).powi(n as i32));
        }
    }

    #[test]
    fn initial_distribution_matches_pauli_expansion() {
        for n in 1..=4 {
            for basis in [0, (1 << n) - 1] {
                let state = StateVector::basis(n, basis).unwrap();
                let via_state = subset_distribution_of(&state).unwrap();
                let direct = initial_subset_distribution(n, basis).unwrap();
                for (a, b) in via_state.as_slice().iter().zip(direct.as_slice()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn empty_set_is_isolated() {
        let mut rng = RngStream::new(1, 0);
        let mut s = SubsetState::empty(5);
        for _ in 0..1000 {
            subset_chain_step(&mut s, &mut rng);
            assert!(s.is_empty());
        }
    }

    #[test]
    fn full_set_shrinks_by_at_most_one() {
        let mut rng = RngStream::new(2, 0);
        for _ in 0..10_000 {
            let mut s = SubsetState::full(7);
            subset_chain_step(&mut s, &mut rng);
            assert!(s.len() >= 6);
        }
    }

    #[test]
    fn sampled_step_matches_exact_row() {
        let q = exact_subset_transition_matrix(2).unwrap();
        let mut rng = RngStream::new(3, 0);
        let samples = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..samples {
            let mut s = SubsetState::from_bits(2, 0b01);
            subset_chain_step(&mut s, &mut rng);
            counts[s.bits() as usize] += 1;
        }
        for bits in 1u64..4 {
            let emp = counts[bits as usize] as f64 / samples as f64;
            assert!((emp - q.get(omega_index(1), omega_index(bits))).abs() < 0.01);
        }
    }

    #[test]
    fn exact_matrix_n2_entries() {
        let q = exact_subset_transition_matrix(2).unwrap();
        let (s1, s2, s12) = (omega_index(1), omega_index(2), omega_index(3));
        assert!((q.get(s1, s12) - 2.0 / 3.0).abs() < 1e-15);
        assert!((q.get(s1, s1) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(q.get(s1, s2), 0.0);
        assert!((q.get(s12, s1) - 2.0 / 9.0).abs() < 1e-15);
        assert!((q.get(s12, s12) - 5.0 / 9.0).abs() < 1e-15);
    }

    /// Holding probability of a `k`-subset, counted by hand: `2k(N−k)`
    /// ordered pairs touch one member and move with 2/3, `k(k−1)` touch two
    /// and move with 4/9.
    fn holding_probability(n: usize, k: usize) -> f64 {
        let (n, k) = (n as f64, k as f64);
        1.0 - (2.0 * k * (n - k) * (2.0 / 3.0) + k * (k - 1.0) * (4.0 / 9.0)) / (n * (n - 1.0))
    }

    #[test]
    fn diagonal_matches_holding_formula() {
        for n in 2..=8 {
            let q = exact_subset_transition_matrix(n).unwrap();
            for (i, d) in q.diagonal().iter().enumerate() {
                let k = omega_bits(i).count_ones() as usize;
                assert!((d - holding_probability(n, k)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exact_matrix_is_stochastic_and_reversible() {
        for n in 2..=10 {
            let q = exact_subset_transition_matrix(n).unwrap();
            assert_eq!(q.exactly_stochastic(), Some(true));
            assert_eq!(q.exactly_reversible(&stationary_weights(n)), Some(true));
            assert!(q.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
            let m = stationary_distribution(n).unwrap();
            assert!(q.detailed_balance_violation(m.as_slice()) < 1e-12);
            assert!(q.stationarity_residual(m.as_slice()) < 1e-10);
        }
    }

    #[test]
    fn exact_matrix_guard() {
        assert!(matches!(
            exact_subset_transition_matrix(15),
            Err(Error::TooManyQubits { .. })
        ));
        assert!(matches!(
            exact_subset_transition_matrix(1),
            Err(Error::TooFewQubits(1))
        ));
    }

    #[test]
    fn stationary_examples() {
        let m = stationary_distribution(2).unwrap();
        let m = m.as_slice();
        assert!((m[omega_index(1)] - 0.2).abs() < 1e-15);
        assert!((m[omega_index(2)] - 0.2).abs() < 1e-15);
        assert!((m[omega_index(3)] - 0.6).abs() < 1e-15);
        for n in 2..=8 {
            let m = stationary_distribution(n).unwrap();
            for n_a in 1..n {
                let mask = (1u64 << n_a) - 1;
                let inside = containment_on_omega(m.as_slice(), mask);
                assert!((inside - stationary_mass_inside(n, n_a)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn purity_from_containment_examples() {
        // asymptotic containment for N = 2, N_A = 1
        let c: f64 = 0.25 + (1.0 - 0.25) * 3.0 / 15.0;
        assert!((c - 0.4).abs() < 1e-15);
        assert!((purity_from_containment(c, 1) - 0.8).abs() < 1e-15);
        assert_eq!(purity_from_containment(1.0, 0), 1.0);
    }

    #[test]
    fn exact_purity_starts_at_one_and_converges() {
        let chain = ExactSubsetChain::new(4).unwrap();
        let part = QubitPartition::first(4, 2).unwrap();
        let series = chain.purity_series(&part, &[0, 2000]).unwrap();
        assert!((series[0] - 1.0).abs() < 1e-12);
        assert!((series[1] - 8.0 / 17.0).abs() < 1e-10);
    }

    #[test]
    fn containment_estimate_examples() {
        let part = QubitPartition::first(6, 2).unwrap();
        let e = estimate_containment(&part, 0, 20_000, 5).unwrap();
        assert!(e.within_sigma(1.0 / 16.0, 3.0, 0.0), "{e:?}");

        let part = QubitPartition::first(4, 2).unwrap();
        let e = estimate_containment(&part, 500, 100_000, 6).unwrap();
        let exact = ExactSubsetChain::new(4)
            .unwrap()
            .containment_series(&part, &[500])
            .unwrap()[0];
        assert!(e.within_sigma(exact, 3.0, 0.0), "{e:?} vs {exact}");
    }

    #[test]
    fn containment_deterministic() {
        let part = QubitPartition::first(5, 2).unwrap();
        let a = containment_trajectories(&part, &[0, 3, 10], 500, 9).unwrap();
        let b = containment_trajectories(&part, &[0, 3, 10], 500, 9).unwrap();
        assert_eq!(a, b);
        assert!(containment_trajectories(&part, &[3, 1], 10, 9).is_err());
    }

    #[test]
    fn full_chain_basic_properties() {
        for n in 2..=3 {
            let p = exact_full_chain_matrix(n).unwrap();
            assert_eq!(p.exactly_stochastic(), Some(true));
            assert_eq!(p.get(0, 0), 1.0);
            assert_eq!(p.row(0).count(), 1);
        }
        assert!(exact_full_chain_matrix(6).is_err());
    }

    #[test]
    fn full_chain_reduces_to_support_chain() {
        for n in 2..=3 {
            let p = exact_full_chain_matrix(n).unwrap();
            let q = exact_subset_transition_matrix(n).unwrap();
            // |0…0⟩: squared weight 2^{-N} on every Z-type string
            let mut full = vec![0.0; 1 << (2 * n)];
            for bits in 0..1usize << n {
                let idx = (0..n)
                    .filter(|k| bits >> k & 1 == 1)
                    .fold(0, |m, k| m | 3 << (2 * k));
                full[idx] = (0.5f64).powi(n as i32);
            }
            let mut omega = vec![(0.5f64).powi(n as i32); omega_size(n)];
            for _ in 0..60 {
                full = p.step(&full);
                omega = q.step(&omega);
                let proj = project_to_supports(n, &full);
                assert!((proj[0] - (0.5f64).powi(n as i32)).abs() < 1e-12);
                for (i, v) in omega.iter().enumerate() {
                    assert!((proj[omega_bits(i) as usize] - v).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn full_chain_tracks_statevector_average() {
        // E[ξ²] after one random gate, averaged over many Haar gates, matches P
        let n = 2;
        let p = exact_full_chain_matrix(n).unwrap();
        let state0 = StateVector::basis(n, 0).unwrap();
        let xi0: Vec<f64> = state0
            .pauli_coefficients()
            .unwrap()
            .values()
            .iter()
            .map(|v| v * v)
            .collect();
        let predicted = p.step(&xi0);
        let mut rng = RngStream::new(8, 0);
        let draws = 20_000;
        let mut acc = [0.0; 16];
        for _ in 0..draws {
            let mut s = state0.clone();
            s.apply_gate(&sample_gate_event(&mut rng, n, GateSet::Haar).unwrap())
                .unwrap();
            for (a, v) in acc.iter_mut().zip(s.pauli_coefficients().unwrap().values()) {
                *a += v * v / draws as f64;
            }
        }
        for (a, b) in acc.iter().zip(&predicted) {
            assert!((a - b).abs() < 0.01, "{a} vs {b}");
        }
    }

    #[test]
    fn csv_export() {
        let csv = distribution_csv(&[0.25, 0.75], true);
        assert_eq!(csv, "subset_bits,probability\n1,0.25\n2,0.75\n");
    }
}
