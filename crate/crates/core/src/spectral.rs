//! Spectral gaps, the Dirichlet-form ratio and the comparison chain.
//!
//! For a chain `Q` reversible with respect to `M`, the matrix
//! `A = D^{1/2} Q D^{-1/2}` (`D = diag(M)`) is symmetric with the same
//! spectrum as `Q`. Its top eigenvector is `√M`, so the gap is read off from
//! the largest eigenvalue on the orthogonal complement of `√M`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{
    exact_subset_transition_matrix, omega_bits, omega_size, stationary_distribution,
};
use crate::matrix::{DistributionVector, TransitionMatrix};

/// Above this many states the gap is computed by Lanczos iteration.
pub const DENSE_EIGEN_LIMIT: usize = 2048;
/// Detailed-balance tolerance accepted by [`spectral_gap`].
pub const REVERSIBILITY_TOL: f64 = 1e-12;
const LANCZOS_MAX_ITER: usize = 400;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMethod {
    ExactEigen,
    Lanczos,
    ComparisonBound,
    AnalyticBound,
}

/// A spectral gap together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub n_qubits: usize,
    pub gap: f64,
    pub method: GapMethod,
    pub alpha: Option<f64>,
    pub gap_r: Option<f64>,
}

/// Result of diagonalizing a reversible chain.
#[derive(Clone, Debug)]
pub struct GapAnalysis {
    pub gap: f64,
    pub second_eigenvalue: f64,
    /// Smallest eigenvalue (dense route only).
    pub smallest_eigenvalue: Option<f64>,
    /// Eigenfunction of `Q` for the second eigenvalue.
    pub eigenfunction: Vec<f64>,
    pub method: GapMethod,
}

/// Sparse rows of a symmetric matrix.
type SparseRows = Vec<Vec<(usize, f64)>>;

fn symmetrized(q: &TransitionMatrix, m: &[f64]) -> Result<(SparseRows, Vec<f64>)> {
    if q.n_states() != m.len() {
        return Err(Error::DimensionMismatch(q.n_states(), m.len()));
    }
    let violation = q.detailed_balance_violation(m);
    if !(violation <= REVERSIBILITY_TOL) {
        return Err(Error::NotReversible(violation));
    }
    let sq: Vec<f64> = m.iter().map(|x| x.sqrt()).collect();
    let rows = (0..q.n_states())
        .map(|i| q.row(i).map(|(j, v)| (j, sq[i] * v / sq[j])).collect())
        .collect();
    Ok((rows, sq))
}

/// Largest asymmetry `|A_ij − A_ji|` of the symmetrized matrix.
pub fn symmetrization_defect(q: &TransitionMatrix, m: &[f64]) -> Result<f64> {
    let (rows, _) = symmetrized(q, m)?;
    let dense = dense_from_rows(&rows);
    Ok((&dense - dense.transpose()).abs().max())
}

fn dense_from_rows(rows: &[Vec<(usize, f64)>]) -> DMatrix<f64> {
    let n = rows.len();
    let mut a = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            a[(i, j)] = v;
        }
    }
    a
}

/// Full spectral information of a reversible chain.
pub fn spectral_analysis(q: &TransitionMatrix, m: &DistributionVector) -> Result<GapAnalysis> {
    let m = m.as_slice();
    let (rows, sq) = symmetrized(q, m)?;
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("need at least two states".into()));
    }
    if rows.len() <= DENSE_EIGEN_LIMIT {
        dense_analysis(&rows, &sq)
    } else {
        Ok(lanczos_analysis(&rows, &sq))
    }
}

fn dense_analysis(rows: &[Vec<(usize, f64)>], sq: &[f64]) -> Result<GapAnalysis> {
    let mut a = dense_from_rows(rows);
    // symmetric up to rounding; average out the last ulps
    a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let second = order[1];
    let lambda2 = eig.eigenvalues[second];
    let phi = eig.eigenvectors.column(second);
    Ok(GapAnalysis {
        gap: 1.0 - lambda2,
        second_eigenvalue: lambda2,
        smallest_eigenvalue: Some(eig.eigenvalues[*order.last().expect("nonempty")]),
        eigenfunction: phi.iter().zip(sq).map(|(p, s)| p / s).collect(),
        method: GapMethod::ExactEigen,
    })
}

fn sparse_matvec(rows: &[Vec<(usize, f64)>], x: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lanczos with full reorthogonalization on the complement of `√M`.
fn lanczos_analysis(rows: &[Vec<(usize, f64)>], sq: &[f64]) -> GapAnalysis {
    let n = rows.len();
    let top: Vec<f64> = {
        let norm = dot(sq, sq).sqrt();
        sq.iter().map(|x| x / norm).collect()
    };
    let project = |v: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for _ in 0..2 {
            for b in std::iter::once(&top).chain(basis.iter()) {
                let c = dot(v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
    };
    // deterministic, generic start vector
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i * 7919) % 104729) as f64 / 104729.0)
        .collect();
    project(&mut v, &[]);
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let iters = LANCZOS_MAX_ITER.min(n - 1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(iters);
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    for k in 0..iters {
        let mut w = sparse_matvec(rows, &v);
        let a = dot(&w, &v);
        alphas.push(a);
        basis.push(v.clone());
        project(&mut w, &basis);
        let b = dot(&w, &w).sqrt();
        if b < 1e-12 || k + 1 == iters {
            break;
        }
        betas.push(b);
        v = w.into_iter().map(|x| x / b).collect();
    }
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let best = eig.eigenvalues.imax();
    let lambda2 = eig.eigenvalues[best];
    let y = eig.eigenvectors.column(best);
    let mut phi = vec![0.0; n];
    for (coef, b) in y.iter().zip(&basis) {
        phi.iter_mut().zip(b).for_each(|(p, x)| *p += coef * x);
    }
    GapAnalysis {
        gap: 1.0 - lambda2,
        second_eigenvalue: lambda2,
        smallest_eigenvalue: None,
        eigenfunction: phi.iter().zip(sq).map(|(p, s)| p / s).collect(),
        method: GapMethod::Lanczos,
    }
}

/// `1 − λ₂(Q)` for a chain reversible with respect to `m`.
pub fn spectral_gap(q: &TransitionMatrix, m: &DistributionVector) -> Result<f64> {
    Ok(spectral_analysis(q, m)?.gap)
}

/// Dirichlet form over variance:
/// `Σ M(S)Q(S,S')(f(S)−f(S'))² / Σ M(T)M(T')(f(T)−f(T'))²`.
pub fn dirichlet_ratio(f: &[f64], q: &TransitionMatrix, m: &DistributionVector) -> Result<f64> {
    let m = m.as_slice();
    if f.len() != m.len() || q.n_states() != m.len() {
        return Err(Error::DimensionMismatch(f.len(), m.len()));
    }
    let mut num = 0.0;
    for i in 0..q.n_states() {
        for (j, v) in q.row(i) {
            num += m[i] * v * (f[i] - f[j]).powi(2);
        }
    }
    // Σ_{T,T'} M M (f − f')² = 2 Var_M(f)
    let mean: f64 = m.iter().zip(f).map(|(w, x)| w * x).sum();
    let var: f64 = m.iter().zip(f).map(|(w, x)| w * (x - mean).powi(2)).sum();
    let scale = f.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if !(var > 1e-24 * scale * scale) {
        return Err(Error::ConstantFunction);
    }
    Ok(num / (2.0 * var))
}

/// The comparison walk on `Ω`: pick `j` uniformly; if `j ∉ B` add it; if
/// `j ∈ B` and `|B| ≥ 2` remove it with probability 1/3; otherwise stay.
/// Numerators are over `3N`.
pub fn comparison_chain_matrix(n: usize) -> Result<TransitionMatrix> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    if n > crate::markov::MAX_EXACT_SUBSET_QUBITS {
        return Err(Error::TooManyQubits {
            what: "comparison_chain_matrix",
            n_qubits: n,
            limit: crate::markov::MAX_EXACT_SUBSET_QUBITS,
        });
    }
    let rows = (0..omega_size(n))
        .map(|i| {
            let b = omega_bits(i);
            let size = b.count_ones();
            let mut stay = 0u64;
            let mut row = Vec::new();
            for j in 0..n {
                let bit = 1u64 << j;
                if b & bit == 0 {
                    row.push(((b | bit) as usize - 1, 3));
                } else if size >= 2 {
                    row.push(((b & !bit) as usize - 1, 1));
                    stay += 2;
                } else {
                    stay += 3;
                }
            }
            row.push((i, stay));
            row
        })
        .collect();
    Ok(TransitionMatrix::from_integer_rows(3 * n as u64, rows))
}

/// `α = 4 / (3(N − 1))`.
pub fn comparison_alpha(n: usize) -> f64 {
    4.0 / (3.0 * (n as f64 - 1.0))
}

/// `4 / (9N(N − 1))`.
pub fn gap_lower_bound(n: usize) -> f64 {
    4.0 / (9.0 * n as f64 * (n as f64 - 1.0))
}

/// Outcome of checking `αR(S,S') ≤ Q(S,S')` off the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationCertificate {
    pub holds: bool,
    pub alpha: f64,
    /// `max (αR − Q)` over off-diagonal pairs; `<= 0` when domination holds.
    pub max_excess: f64,
    /// A pair `(S, S')` (as bit masks) attaining the largest excess when it fails.
    pub worst_pair: Option<(u64, u64)>,
}

/// Domination check with `α = 4/(3(N−1))`.
pub fn verify_comparison_domination(
    q: &TransitionMatrix,
    r: &TransitionMatrix,
    n: usize,
) -> Result<DominationCertificate> {
    verify_domination_with_alpha(q, r, comparison_alpha(n))
}

pub fn verify_domination_with_alpha(
    q: &TransitionMatrix,
    r: &TransitionMatrix,
    alpha: f64,
) -> Result<DominationCertificate> {
    if q.n_states() != r.n_states() {
        return Err(Error::DimensionMismatch(q.n_states(), r.n_states()));
    }
    let mut max_excess = f64::NEG_INFINITY;
    let mut worst = None;
    for i in 0..r.n_states() {
        for (j, v) in r.row(i).filter(|&(j, _)| j != i) {
            let excess = alpha * v - q.get(i, j);
            if excess > max_excess {
                max_excess = excess;
                worst = Some((omega_bits(i), omega_bits(j)));
            }
        }
    }
    let holds = max_excess <= 1e-12;
    Ok(DominationCertificate {
        holds,
        alpha,
        max_excess,
        worst_pair: if holds { None } else { worst },
    })
}

/// Domination at `α = 4/(3(N−1))` in integer arithmetic:
/// `αR = 4r / (9N(N−1))` against `Q = k / (9N(N−1))`, i.e. `4r ≤ k`.
pub fn exact_domination(q: &TransitionMatrix, r: &TransitionMatrix, n: usize) -> Option<bool> {
    let (qe, re) = (q.exact()?, r.exact()?);
    if qe.denominator != 9 * (n * (n - 1)) as u64 || re.denominator != 3 * n as u64 {
        return None;
    }
    Some((0..r.n_states()).all(|i| {
        r.exact_row(i)
            .expect("exact")
            .filter(|&(j, _)| j != i)
            .all(|(j, rv)| 4 * rv <= q.exact_get(i, j).expect("exact"))
    }))
}

/// Both forms of the distance-to-equilibrium bound.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceBound {
    /// `e^{−λn} / √(min M) = e^{−λn} √((4^N − 1)/3)`.
    pub sharp: f64,
    /// `2^N e^{−λn}`.
    pub loose: f64,
}

pub fn convergence_bound(gap: f64, n: usize, steps: u64) -> Result<ConvergenceBound> {
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::InvalidArgument(format!("gap {gap} outside (0, 1]")));
    }
    let decay = (-gap * steps as f64).exp();
    Ok(ConvergenceBound {
        sharp: decay * ((4f64.powi(n as i32) - 1.0) / 3.0).sqrt(),
        loose: 2f64.powi(n as i32) * decay,
    })
}

/// `4^N exp(−4n / (9N(N−1)))`.
pub fn lemma1_envelope(n: usize, steps: u64) -> f64 {
    let nf = n as f64;
    4f64.powi(n as i32) * (-4.0 * steps as f64 / (9.0 * nf * (nf - 1.0))).exp()
}

/// One row of the gap table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub n_qubits: usize,
    pub gap_exact: f64,
    pub gap_paper_bound: f64,
    pub alpha: f64,
    #[serde(rename = "gap_R")]
    pub gap_r: f64,
}

/// Exact gaps of `Q` and `R` for one register size.
pub fn gap_record(n: usize) -> Result<GapRecord> {
    let m = stationary_distribution(n)?;
    let q = exact_subset_transition_matrix(n)?;
    let r = comparison_chain_matrix(n)?;
    Ok(GapRecord {
        n_qubits: n,
        gap_exact: spectral_gap(&q, &m)?,
        gap_paper_bound: gap_lower_bound(n),
        alpha: comparison_alpha(n),
        gap_r: spectral_gap(&r, &m)?,
    })
}

impl GapRecord {
    pub fn reports(&self) -> [GapReport; 3] {
        [
            GapReport {
                n_qubits: self.n_qubits,
                gap: self.gap_exact,
                method: GapMethod::ExactEigen,
                alpha: None,
                gap_r: None,
            },
            GapReport {
                n_qubits: self.n_qubits,
                gap: self.alpha * self.gap_r,
                method: GapMethod::ComparisonBound,
                alpha: Some(self.alpha),
                gap_r: Some(self.gap_r),
            },
            GapReport {
                n_qubits: self.n_qubits,
                gap: self.gap_paper_bound,
                method: GapMethod::AnalyticBound,
                alpha: None,
                gap_r: None,
            },
        ]
    }
}

/// Dense eigen-decomposition of a symmetric matrix, ascending eigenvalues.
pub fn symmetric_eigenvalues(a: DMatrix<f64>) -> DVector<f64> {
    let mut ev = SymmetricEigen::new(a).eigenvalues;
    ev.as_mut_slice().sort_by(f64::total_cmp);
    ev
}
