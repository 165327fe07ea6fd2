//! Subsets of qubits as packed bit-vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of `{0, .., n-1}` (printed 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetState {
    n: usize,
    words: Vec<u64>,
}

impl SubsetState {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for k in 0..n {
            s.insert(k);
        }
        s
    }

    /// From 0-based indices. Indices `>= n` are ignored.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for k in indices.into_iter().filter(|&k| k < n) {
            s.insert(k);
        }
        s
    }

    /// From the low `n` bits of an integer mask (`n <= 64`).
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64, "from_bits supports at most 64 qubits");
        let mut s = Self::empty(n);
        s.words[0] = if n == 64 {
            bits
        } else {
            bits & ((1u64 << n) - 1)
        };
        s
    }

    /// Integer mask for `n <= 64`.
    pub fn bits(&self) -> u64 {
        assert!(self.n <= 64, "bits() supports at most 64 qubits");
        self.words[0]
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn contains(&self, k: usize) -> bool {
        k < self.n && (self.words[k >> 6] >> (k & 63)) & 1 == 1
    }

    pub fn insert(&mut self, k: usize) {
        self.words[k >> 6] |= 1 << (k & 63);
    }

    pub fn remove(&mut self, k: usize) {
        self.words[k >> 6] &= !(1 << (k & 63));
    }

    pub fn set(&mut self, k: usize, member: bool) {
        if member {
            self.insert(k)
        } else {
            self.remove(k)
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &SubsetState) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&k| self.contains(k))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|k| k + 1).collect()
    }
}

impl fmt::Display for SubsetState {
    /// Sorted 1-based index list, e.g. `[1,3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.to_one_based().iter().map(|k| k.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}
