//! Bipartitions of the qubit register.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::SubsetState;

/// Subsystem `A` of an `n`-qubit register; `B` is the complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitPartition {
    n_qubits: usize,
    a: Vec<usize>,
}

impl QubitPartition {
    /// `a` holds 0-based indices; it must be a nonempty proper subset.
    pub fn new(n_qubits: usize, a: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut a: Vec<usize> = a.into_iter().collect();
        a.sort_unstable();
        a.dedup();
        if let Some(&k) = a.iter().find(|&&k| k >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: k, n_qubits });
        }
        if a.is_empty() || a.len() == n_qubits {
            return Err(Error::InvalidPartition(format!(
                "A must be a nonempty proper subset of {n_qubits} qubits (|A| = {})",
                a.len()
            )));
        }
        Ok(Self { n_qubits, a })
    }

    /// `A` = the first `n_a` qubits.
    pub fn first(n_qubits: usize, n_a: usize) -> Result<Self> {
        Self::new(n_qubits, 0..n_a)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_a(&self) -> usize {
        self.a.len()
    }

    pub fn n_b(&self) -> usize {
        self.n_qubits - self.a.len()
    }

    /// `N_B - N_A`; may be negative.
    pub fn offset(&self) -> i64 {
        self.n_b() as i64 - self.n_a() as i64
    }

    /// The offset, rejecting `N_A > N_B`.
    pub fn nonnegative_offset(&self) -> Result<u32> {
        u32::try_from(self.offset()).map_err(|_| {
            Error::InvalidPartition(format!(
                "requires N_A <= N_B, got N_A = {}, N_B = {}",
                self.n_a(),
                self.n_b()
            ))
        })
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|k| self.a.binary_search(k).is_err())
            .collect()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.a.binary_search(&k).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            a: self.b(),
        }
    }

    pub fn a_subset(&self) -> SubsetState {
        SubsetState::from_indices(self.n_qubits, self.a.iter().copied())
    }

    /// Bitmask of `A` for registers of at most 64 qubits.
    pub fn a_mask(&self) -> u64 {
        self.a.iter().fold(0u64, |m, &k| m | (1 << k))
    }
}
