//! Stabilizer-tableau engine.
//!
//! The tableau keeps only the `N` stabilizer generators. Bits are stored
//! column-major: for every qubit there is one packed word-vector of X bits and
//! one of Z bits running over the generators, so single- and two-qubit gates
//! touch `O(N / 64)` words. Entanglement across a cut is the GF(2) rank of
//! the generator matrix restricted to the columns of `A`, minus `N_A`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gates::{CliffordGate, GateEvent};
use crate::partition::QubitPartition;
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    x: Vec<Vec<u64>>,
    z: Vec<Vec<u64>>,
    phase: Vec<u64>,
}

impl StabilizerTableau {
    /// `|0…0⟩`, stabilized by `Z_1, …, Z_N`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "tableau needs at least one qubit".into(),
            ));
        }
        let words = n.div_ceil(64);
        let mut t = Self {
            n,
            words,
            x: vec![vec![0; words]; n],
            z: vec![vec![0; words]; n],
            phase: vec![0; words],
        };
        for q in 0..n {
            t.z[q][q >> 6] |= 1 << (q & 63);
        }
        Ok(t)
    }

    /// Build from explicit generators (`negative` = phase bit).
    pub fn from_generators(gens: &[(PauliString, bool)]) -> Result<Self> {
        let n = gens.len();
        let mut t = Self::zero(n)?;
        t.z.iter_mut().for_each(|c| c.fill(0));
        for (row, (p, negative)) in gens.iter().enumerate() {
            if p.n_qubits() != n {
                return Err(Error::DimensionMismatch(p.n_qubits(), n));
            }
            for q in 0..n {
                let (xb, zb) = p.get(q).xz();
                t.set_bit(Column::X, q, row, xb);
                t.set_bit(Column::Z, q, row, zb);
            }
            if *negative {
                t.phase[row >> 6] |= 1 << (row & 63);
            }
        }
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    fn set_bit(&mut self, col: Column, q: usize, row: usize, v: bool) {
        let c = match col {
            Column::X => &mut self.x[q],
            Column::Z => &mut self.z[q],
        };
        if v {
            c[row >> 6] |= 1 << (row & 63);
        } else {
            c[row >> 6] &= !(1 << (row & 63));
        }
    }

    fn bit(v: &[u64], row: usize) -> bool {
        (v[row >> 6] >> (row & 63)) & 1 == 1
    }

    /// Generator `row` as a Pauli string with its sign.
    pub fn generator(&self, row: usize) -> (PauliString, bool) {
        let labels = (0..self.n)
            .map(|q| Pauli::from_xz(Self::bit(&self.x[q], row), Self::bit(&self.z[q], row)))
            .collect();
        (
            PauliString::new(labels).expect("n >= 1"),
            Self::bit(&self.phase, row),
        )
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

    pub fn apply_h(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        for w in 0..self.words {
            self.phase[w] ^= self.x[q][w] & self.z[q][w];
        }
        std::mem::swap(&mut self.x[q], &mut self.z[q]);
        Ok(())
    }

    pub fn apply_s(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        for w in 0..self.words {
            let xw = self.x[q][w];
            self.phase[w] ^= xw & self.z[q][w];
            self.z[q][w] ^= xw;
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.check_qubit(q)?;
        for w in 0..self.words {
            self.phase[w] ^= match p {
                Pauli::I => 0,
                Pauli::X => self.z[q][w],
                Pauli::Y => self.x[q][w] ^ self.z[q][w],
                Pauli::Z => self.x[q][w],
            };
        }
        Ok(())
    }

    pub fn apply_single(&mut self, q: usize, g: CliffordGate) -> Result<()> {
        match g {
            CliffordGate::X => self.apply_pauli(q, Pauli::X),
            CliffordGate::Y => self.apply_pauli(q, Pauli::Y),
            CliffordGate::Z => self.apply_pauli(q, Pauli::Z),
            CliffordGate::S => self.apply_s(q),
            CliffordGate::H => self.apply_h(q),
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameControlTarget(control));
        }
        for w in 0..self.words {
            let (xa, za) = (self.x[control][w], self.z[control][w]);
            let (xb, zb) = (self.x[target][w], self.z[target][w]);
            self.phase[w] ^= xa & zb & !(xb ^ za);
            self.x[target][w] = xb ^ xa;
            self.z[control][w] = za ^ zb;
        }
        Ok(())
    }

    /// Conjugate by one circuit step; both single-qubit gates must be Clifford.
    pub fn apply_clifford(&mut self, g: &GateEvent) -> Result<()> {
        g.check_range(self.n)?;
        let uc = g.u_control().as_clifford().ok_or(Error::NonClifford)?;
        let ut = g.u_target().as_clifford().ok_or(Error::NonClifford)?;
        self.apply_single(g.control(), uc)?;
        self.apply_single(g.target(), ut)?;
        self.apply_cnot(g.control(), g.target())
    }

    /// Entanglement entropy across the cut, in bits.
    pub fn stabilizer_entropy(&self, part: &QubitPartition) -> Result<usize> {
        if part.n_qubits() != self.n {
            return Err(Error::DimensionMismatch(part.n_qubits(), self.n));
        }
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(2 * part.n_a());
        for &q in part.a() {
            cols.push(self.x[q].clone());
            cols.push(self.z[q].clone());
        }
        Ok(gf2_rank(&mut cols) - part.n_a())
    }

    /// Rank of the full `N × 2N` generator matrix.
    pub fn rank(&self) -> usize {
        let mut cols: Vec<Vec<u64>> = self.x.iter().chain(&self.z).cloned().collect();
        gf2_rank(&mut cols)
    }

    /// Whether every pair of generators commutes.
    pub fn generators_commute(&self) -> bool {
        let rows: Vec<(Vec<bool>, Vec<bool>)> = (0..self.n)
            .map(|r| {
                (
                    (0..self.n).map(|q| Self::bit(&self.x[q], r)).collect(),
                    (0..self.n).map(|q| Self::bit(&self.z[q], r)).collect(),
                )
            })
            .collect();
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| {
                let s = (0..self.n)
                    .filter(|&q| (rows[i].0[q] && rows[j].1[q]) ^ (rows[i].1[q] && rows[j].0[q]))
                    .count();
                s % 2 == 0
            })
        })
    }

    /// One line per generator: `<x bits> <z bits> <phase bit>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n {
            for q in 0..self.n {
                out.push(if Self::bit(&self.x[q], r) { '1' } else { '0' });
            }
            out.push(' ');
            for q in 0..self.n {
                out.push(if Self::bit(&self.z[q], r) { '1' } else { '0' });
            }
            let _ = writeln!(out, " {}", u8::from(Self::bit(&self.phase, r)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        for (lineno, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected '<x> <z> <phase>'", lineno + 1));
            let [xs, zs, ph] = fields.as_slice() else {
                return Err(bad());
            };
            if xs.len() != zs.len() {
                return Err(bad());
            }
            let bits = |s: &str| -> Result<Vec<bool>> {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(bad()),
                    })
                    .collect()
            };
            let (xb, zb) = (bits(xs)?, bits(zs)?);
            let labels = xb
                .iter()
                .zip(&zb)
                .map(|(&x, &z)| Pauli::from_xz(x, z))
                .collect();
            let negative = match *ph {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            gens.push((PauliString::new(labels)?, negative));
        }
        Self::from_generators(&gens)
    }
}

#[derive(Copy, Clone)]
enum Column {
    X,
    Z,
}

/// GF(2) rank of a set of packed bit-vectors (consumed as scratch space).
pub fn gf2_rank(vectors: &mut [Vec<u64>]) -> usize {
    let mut rank = 0;
    let words = vectors.first().map_or(0, Vec::len);
    for w in 0..words {
        for b in 0..64 {
            let mask = 1u64 << b;
            let Some(pivot) = (rank..vectors.len()).find(|&i| vectors[i][w] & mask != 0) else {
                continue;
            };
            vectors.swap(rank, pivot);
            let (head, tail) = vectors.split_at_mut(rank + 1);
            let p = &head[rank];
            for v in tail.iter_mut().filter(|v| v[w] & mask != 0) {
                for k in w..words {
                    v[k] ^= p[k];
                }
            }
            rank += 1;
            if rank == vectors.len() {
                return rank;
            }
        }
    }
    rank
}
