//! Closed-form asymptotics, theorem thresholds, entropy histograms and
//! total-variation cutoff detection.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;

/// Average purity of `A` under the uniform measure:
/// `(2^{N_A} + 2^{N_B}) / (2^N + 1)`.
pub fn haar_average_purity(n_a: usize, n_b: usize) -> f64 {
    let (da, db) = (2f64.powi(n_a as i32), 2f64.powi(n_b as i32));
    (da + db) / (da * db + 1.0)
}

/// `N_A − 2^{−t} / ln 2`; `offset` may be `f64::INFINITY`.
pub fn haar_entropy_floor(n_a: usize, offset: f64) -> Result<f64> {
    if !(offset >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "offset must be >= 0, got {offset}"
        )));
    }
    Ok(n_a as f64 - (-offset).exp2() / LN_2)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// Smallest `n` with `n ≥ 9N(N−1)[(3 ln 2)N + ln ε^{−1}]/4`.
pub fn theorem1_threshold(n_qubits: usize, epsilon: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    if n_qubits < 2 {
        return Err(Error::TooFewQubits(n_qubits));
    }
    let n = n_qubits as f64;
    let bound = 9.0 * n * (n - 1.0) * (3.0 * LN_2 * n + (1.0 / epsilon).ln()) / 4.0;
    Ok(bound.ceil() as u64)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Floors {
    /// `N_A − (2^{−t} + ε)/ln 2`.
    pub entropy: f64,
    /// `1 − √((2^{−t} + ε)/(2 ln 2))`.
    pub fidelity: f64,
}

pub fn theorem1_floors(n_a: usize, offset: f64, epsilon: f64) -> Result<Theorem1Floors> {
    check_epsilon(epsilon)?;
    if !(offset >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "offset must be >= 0, got {offset}"
        )));
    }
    let slack = (-offset).exp2() + epsilon;
    Ok(Theorem1Floors {
        entropy: n_a as f64 - slack / LN_2,
        fidelity: 1.0 - (slack / (2.0 * LN_2)).sqrt(),
    })
}

/// Entropies rounded to the nearest integer (ties up), bins `0..=N_A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyHistogram {
    pub n_qubits: usize,
    pub n_a: usize,
    pub step: usize,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl EntropyHistogram {
    pub fn new(n_qubits: usize, n_a: usize, step: usize) -> Self {
        Self {
            n_qubits,
            n_a,
            step,
            counts: vec![0; n_a + 1],
            total: 0,
        }
    }

    pub fn from_entropies(n_qubits: usize, n_a: usize, step: usize, values: &[f64]) -> Self {
        let mut h = Self::new(n_qubits, n_a, step);
        for &v in values {
            h.add(v);
        }
        h
    }

    pub fn bin_of(&self, entropy: f64) -> usize {
        let b = (entropy + 0.5).floor().max(0.0) as usize;
        b.min(self.n_a)
    }

    pub fn add(&mut self, entropy: f64) {
        let b = self.bin_of(entropy);
        self.counts[b] += 1;
        self.total += 1;
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.total.max(1) as f64)
            .collect()
    }

    pub fn tv_distance(&self, other: &EntropyHistogram) -> Result<f64> {
        if self.n_a != other.n_a {
            return Err(Error::DimensionMismatch(self.n_a + 1, other.n_a + 1));
        }
        tv_distance(&self.probabilities(), &other.probabilities())
    }

    /// Rough one-sigma error of the TV between two independent empirical
    /// histograms: `½ Σ √(p(1−p)/n₁ + q(1−q)/n₂)`.
    pub fn tv_error(&self, other: &EntropyHistogram) -> f64 {
        let (p, q) = (self.probabilities(), other.probabilities());
        let (n1, n2) = (self.total.max(1) as f64, other.total.max(1) as f64);
        0.5 * p
            .iter()
            .zip(&q)
            .map(|(a, b)| (a * (1.0 - a) / n1 + b * (1.0 - b) / n2).sqrt())
            .sum::<f64>()
    }
}

/// Half the L1 distance between two distributions (each normalized first).
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
    if !(sp > 0.0 && sq > 0.0) {
        return Err(Error::InvalidArgument(
            "distributions must have positive mass".into(),
        ));
    }
    Ok(0.5
        * p.iter()
            .zip(q)
            .map(|(a, b)| (a / sp - b / sq).abs())
            .sum::<f64>())
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvPoint {
    pub step: usize,
    pub tv: f64,
    pub tv_err: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TvCurve {
    pub points: Vec<TvPoint>,
}

impl TvCurve {
    /// First step where TV drops below `level`, linearly interpolated
    /// between the bracketing samples.
    pub fn first_crossing(&self, level: f64) -> Option<f64> {
        let i = self.points.iter().position(|p| p.tv < level)?;
        if i == 0 {
            return Some(self.points[0].step as f64);
        }
        let (a, b) = (self.points[i - 1], self.points[i]);
        let frac = (a.tv - level) / (a.tv - b.tv);
        Some(a.step as f64 + frac * (b.step as f64 - a.step as f64))
    }
}

/// Finite-size cutoff summary: location is the 0.5 crossing, window the
/// distance between the 0.9 and 0.1 crossings.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffReport {
    pub n_qubits: usize,
    pub location: f64,
    pub window: f64,
    pub ratio: f64,
}

pub fn cutoff_report(curve: &TvCurve, n_qubits: usize) -> Option<CutoffReport> {
    let hi = curve.first_crossing(0.9)?;
    let mid = curve.first_crossing(0.5)?;
    let lo = curve.first_crossing(0.1)?;
    if !(mid > 0.0) {
        return None;
    }
    let window = (lo - hi).max(0.0);
    Some(CutoffReport {
        n_qubits,
        location: mid,
        window,
        ratio: window / mid,
    })
}

/// Exact TV to `target` of `initial · Q^n` for every `n ≤ max_steps`.
pub fn exact_tv_curve(
    q: &TransitionMatrix,
    initial: &[f64],
    target: &[f64],
    max_steps: usize,
) -> Result<Vec<f64>> {
    let mut p = initial.to_vec();
    let mut out = Vec::with_capacity(max_steps + 1);
    out.push(tv_distance(&p, target)?);
    for _ in 0..max_steps {
        p = q.step(&p);
        out.push(tv_distance(&p, target)?);
    }
    Ok(out)
}

/// First `n` with exact TV below `threshold`, if reached within `max_steps`.
pub fn tv_mixing_time(
    q: &TransitionMatrix,
    initial: &[f64],
    target: &[f64],
    threshold: f64,
    max_steps: usize,
) -> Result<Option<usize>> {
    let mut p = initial.to_vec();
    for n in 0..=max_steps {
        if tv_distance(&p, target)? < threshold {
            return Ok(Some(n));
        }
        p = q.step(&p);
    }
    Ok(None)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
