//! Sparse row-stochastic matrices over an enumerated state space.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probabilities over an enumerated state space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionVector {
    probs: Vec<f64>,
}

impl DistributionVector {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidArgument("negative or NaN probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    /// Normalize nonnegative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidArgument(
                "weights must have positive total".into(),
            ));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// Integer weights sharing one denominator, aligned with the sparse entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactWeights {
    pub denominator: u64,
    pub numerators: Vec<u64>,
}

/// CSR transition matrix; entries with probability zero are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    n_states: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    exact: Option<ExactWeights>,
}

impl TransitionMatrix {
    /// From per-row `(column, probability)` lists.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n_states = rows.len();
        let mut row_ptr = Vec::with_capacity(n_states + 1);
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row.into_iter().filter(|&(_, v)| v != 0.0) {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            n_states,
            row_ptr,
            cols,
            vals,
            exact: None,
        }
    }

    /// From integer numerators over a common denominator; keeps the exact form.
    pub fn from_integer_rows(denominator: u64, rows: Vec<Vec<(usize, u64)>>) -> Self {
        let n_states = rows.len();
        let mut row_ptr = Vec::with_capacity(n_states + 1);
        let (mut cols, mut vals, mut nums) = (Vec::new(), Vec::new(), Vec::new());
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, k) in row.into_iter().filter(|&(_, k)| k != 0) {
                cols.push(c);
                vals.push(k as f64 / denominator as f64);
                nums.push(k);
            }
            row_ptr.push(cols.len());
        }
        Self {
            n_states,
            row_ptr,
            cols,
            vals,
            exact: Some(ExactWeights {
                denominator,
                numerators: nums,
            }),
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn exact(&self) -> Option<&ExactWeights> {
        self.exact.as_ref()
    }

    /// Nonzero `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    /// Nonzero `(column, numerator)` pairs of row `i`, if exact weights exist.
    pub fn exact_row(&self, i: usize) -> Option<impl Iterator<Item = (usize, u64)> + '_> {
        let ex = self.exact.as_ref()?;
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        Some(
            self.cols[r.clone()]
                .iter()
                .copied()
                .zip(ex.numerators[r].iter().copied()),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn exact_get(&self, i: usize, j: usize) -> Option<u64> {
        let ex = self.exact.as_ref()?;
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        Some(match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => ex.numerators[r.start + k],
            Err(_) => 0,
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n_states).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_states)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }

    /// Every exact row sums to the denominator. `None` without exact weights.
    pub fn exactly_stochastic(&self) -> Option<bool> {
        let den = self.exact.as_ref()?.denominator;
        Some((0..self.n_states).all(|i| {
            self.exact_row(i)
                .expect("exact")
                .map(|(_, k)| k)
                .sum::<u64>()
                == den
        }))
    }

    /// `p ↦ p Q` (one step of a distribution).
    pub fn step(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_states];
        for (i, &pi) in p.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (j, v) in self.row(i) {
                out[j] += pi * v;
            }
        }
        out
    }

    /// `f ↦ Q f`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        (0..self.n_states)
            .map(|i| self.row(i).map(|(j, v)| v * f[j]).sum())
            .collect()
    }

    /// `max_i |(πQ)_i − π_i|`.
    pub fn stationarity_residual(&self, pi: &[f64]) -> f64 {
        self.step(pi)
            .iter()
            .zip(pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `max |π_i Q_ij − π_j Q_ji|` over stored entries.
    pub fn detailed_balance_violation(&self, pi: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n_states {
            for (j, v) in self.row(i) {
                worst = worst.max((pi[i] * v - pi[j] * self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Detailed balance in integer arithmetic against unnormalized weights.
    pub fn exactly_reversible(&self, weights: &[u64]) -> Option<bool> {
        self.exact.as_ref()?;
        Some((0..self.n_states).all(|i| {
            self.exact_row(i).expect("exact").all(|(j, k)| {
                let back = self.exact_get(j, i).expect("exact");
                u128::from(weights[i]) * u128::from(k) == u128::from(weights[j]) * u128::from(back)
            })
        }))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n_states, self.n_states);
        for i in 0..self.n_states {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Coordinate triplets with header `row_index,col_index,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row_index,col_index,value\n");
        for i in 0..self.n_states {
            for (j, v) in self.row(i) {
                out.push_str(&format!("{i},{j},{v}\n"));
            }
        }
        out
    }
}
