//! Dense statevector engine.
//!
//! Qubit `k` (0-based) is bit `k` of the amplitude index.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gates::{GateEvent, Mat2};
use crate::partition::QubitPartition;
use crate::pauli::PauliString;

/// Largest register the dense engine accepts.
pub const MAX_QUBITS: usize = 24;
/// Largest register for the full 4^N Pauli expansion.
pub const MAX_PAULI_QUBITS: usize = 8;
/// Reduced-state eigenvalues below this are treated as zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} >= 2^{n}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(amps.len(), 1 << n));
        }
        let s = Self { n, amps };
        let err = (s.norm_sqr() - 1.0).abs();
        if !(err <= 1e-10) {
            return Err(Error::InvalidArgument(format!(
                "state not normalized (|norm²-1| = {err:e})"
            )));
        }
        Ok(s)
    }

    /// Haar-random pure state: a normalized complex Gaussian vector.
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_size(n)?;
        let mut amps: Vec<C64> = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_single(&mut self, q: usize, u: &Mat2) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        for i0 in (0..self.amps.len()).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[i1] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameControlTarget(control));
        }
        let (cb, tb) = (1usize << control, 1usize << target);
        for i in (0..self.amps.len()).filter(|i| i & cb != 0 && i & tb == 0) {
            self.amps.swap(i, i | tb);
        }
        Ok(())
    }

    /// `CNOT[c,t] · (U[c] ⊗ V[t])`.
    pub fn apply_gate(&mut self, g: &GateEvent) -> Result<()> {
        g.check_range(self.n)?;
        self.apply_single(g.control(), &g.u_control().matrix())?;
        self.apply_single(g.target(), &g.u_target().matrix())?;
        self.apply_cnot(g.control(), g.target())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_partition(&self, part: &QubitPartition) -> Result<()> {
        if part.n_qubits() != self.n {
            return Err(Error::DimensionMismatch(part.n_qubits(), self.n));
        }
        Ok(())
    }

    /// Gram matrix of the coefficient matrix on the smaller side of the cut.
    /// Its eigenvalues are the Schmidt coefficients.
    fn reduced_gram(&self, part: &QubitPartition) -> Result<DMatrix<C64>> {
        self.check_partition(part)?;
        let (small, large) = if part.n_a() <= part.n_b() {
            (part.a().to_vec(), part.b())
        } else {
            (part.b(), part.a().to_vec())
        };
        let (ds, dl) = (1usize << small.len(), 1usize << large.len());
        let mut psi = DMatrix::<C64>::zeros(ds, dl);
        for (idx, amp) in self.amps.iter().enumerate() {
            let gather = |qs: &[usize]| {
                qs.iter()
                    .enumerate()
                    .fold(0usize, |acc, (pos, &q)| acc | (((idx >> q) & 1) << pos))
            };
            psi[(gather(&small), gather(&large))] = *amp;
        }
        Ok(&psi * psi.adjoint())
    }

    /// `Tr(ρ_A²)`.
    pub fn reduced_purity(&self, part: &QubitPartition) -> Result<f64> {
        let g = self.reduced_gram(part)?;
        Ok(g.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Eigenvalues of the reduced state on the smaller side, descending.
    pub fn schmidt_spectrum(&self, part: &QubitPartition) -> Result<Vec<f64>> {
        let g = self.reduced_gram(part)?;
        let mut ev: Vec<f64> = g
            .symmetric_eigenvalues()
            .iter()
            .map(|&l| if l < EIGEN_FLOOR { 0.0 } else { l })
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        Ok(ev)
    }

    /// Von Neumann entropy of `ρ_A` in bits.
    pub fn entanglement_entropy(&self, part: &QubitPartition) -> Result<f64> {
        Ok(entropy_bits(&self.schmidt_spectrum(part)?))
    }

    /// Largest overlap `|⟨ψ|Ψ⟩|` with a maximally entangled state across the cut.
    pub fn max_overlap_max_entangled(&self, part: &QubitPartition) -> Result<f64> {
        part.nonnegative_offset()?;
        let spectrum = self.schmidt_spectrum(part)?;
        Ok(overlap_from_spectrum(&spectrum, part.n_a()))
    }

    /// `index,lambda` rows of the Schmidt spectrum.
    pub fn schmidt_csv(&self, part: &QubitPartition) -> Result<String> {
        let mut out = String::from("index,lambda\n");
        for (i, l) in self.schmidt_spectrum(part)?.iter().enumerate() {
            out.push_str(&format!("{i},{l}\n"));
        }
        Ok(out)
    }

    /// `ξ(p) = 2^{-N/2} ⟨ψ|σ^p|ψ⟩` for all `4^N` strings.
    pub fn pauli_coefficients(&self) -> Result<PauliCoefficients> {
        if self.n > MAX_PAULI_QUBITS {
            return Err(Error::TooManyQubits {
                what: "pauli_coefficients",
                n_qubits: self.n,
                limit: MAX_PAULI_QUBITS,
            });
        }
        let scale = (0.5f64).powf(self.n as f64 / 2.0);
        let values = (0..1usize << (2 * self.n))
            .map(|p| {
                let (mut xmask, mut zmask, mut n_y) = (0usize, 0usize, 0u32);
                for k in 0..self.n {
                    let (x, z) = crate::pauli::Pauli::from_index(p >> (2 * k)).xz();
                    xmask |= usize::from(x) << k;
                    zmask |= usize::from(z) << k;
                    n_y += u32::from(x && z);
                }
                let mut acc = C64::new(0.0, 0.0);
                for (j, &a) in self.amps.iter().enumerate() {
                    let term = self.amps[j ^ xmask].conj() * a;
                    if (j & zmask).count_ones() % 2 == 1 {
                        acc -= term;
                    } else {
                        acc += term;
                    }
                }
                (acc * C64::i().powu(n_y)).re * scale
            })
            .collect();
        Ok(PauliCoefficients { n: self.n, values })
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "state needs at least one qubit".into(),
        ));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            what: "statevector",
            n_qubits: n,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// `-Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|&&l| l > EIGEN_FLOOR)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// `(Σ √λ_i) / √(2^{n_a})`.
pub fn overlap_from_spectrum(spectrum: &[f64], n_a: usize) -> f64 {
    let s: f64 = spectrum.iter().map(|l| l.max(0.0).sqrt()).sum();
    (s / (2f64).powi(n_a as i32).sqrt()).min(1.0)
}

/// Pauli expansion coefficients, indexed by [`PauliString::index`].
#[derive(Clone, Debug)]
pub struct PauliCoefficients {
    n: usize,
    values: Vec<f64>,
}

impl PauliCoefficients {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, p: &PauliString) -> f64 {
        self.values[p.index()]
    }

    /// `2^{N_B} Σ_{supp(p) ⊆ A} ξ(p)²`.
    pub fn purity_from_coefficients(&self, part: &QubitPartition) -> f64 {
        let mask = part.a_mask();
        let total: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(p, _)| {
                let supp = (0..self.n)
                    .filter(|k| (p >> (2 * k)) & 3 != 0)
                    .fold(0u64, |m, k| m | 1 << k);
                supp & !mask == 0
            })
            .map(|(_, v)| v * v)
            .sum();
        (2f64).powi(part.n_b() as i32) * total
    }
}
