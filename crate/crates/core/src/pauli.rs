//! Pauli labels, strings and the CNOT conjugation map.
//!
//! The occupation rule derived here (twirl each occupied qubit over
//! {X, Y, Z}, then conjugate by CNOT) is the local move that every
//! Markov-chain engine in this crate is built from.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::subset::SubsetState;

/// Single-qubit Pauli label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(k: usize) -> Pauli {
        Self::ALL[k & 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Symplectic (x, z) bits; Y carries both.
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_xz(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("'{other}' is not a Pauli label"))),
        }
    }
}

/// A tensor product of single-qubit Paulis on `n` qubits. Position `k` is
/// qubit `k + 1` in the 1-based convention used for I/O.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    labels: Vec<Pauli>,
}

impl PauliString {
    pub fn new(labels: Vec<Pauli>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument(
                "Pauli string needs at least one qubit".into(),
            ));
        }
        Ok(Self { labels })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            labels: vec![Pauli::I; n.max(1)],
        }
    }

    /// Decode a base-4 index; qubit `k` is digit `k` (least significant first).
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let labels = (0..n)
            .map(|_| {
                let p = Pauli::from_index(index & 3);
                index >>= 2;
                p
            })
            .collect();
        Self { labels }
    }

    pub fn index(&self) -> usize {
        self.labels
            .iter()
            .rev()
            .fold(0, |acc, p| (acc << 2) | p.index())
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    pub fn get(&self, k: usize) -> Pauli {
        self.labels[k]
    }

    pub fn set(&mut self, k: usize, p: Pauli) {
        self.labels[k] = p;
    }

    pub fn support(&self) -> SubsetState {
        support(self)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.labels {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        PauliString::new(labels)
    }
}

/// Positions carrying a non-identity label.
pub fn support(p: &PauliString) -> SubsetState {
    let mut s = SubsetState::empty(p.n_qubits());
    for (k, l) in p.labels.iter().enumerate() {
        if !l.is_identity() {
            s.insert(k);
        }
    }
    s
}

/// Labels on a (control, target) pair together with a ±1 sign.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliPair {
    pub control: Pauli,
    pub target: Pauli,
    /// `false` for +1, `true` for -1.
    pub negative: bool,
}

impl PauliPair {
    pub fn new(control: Pauli, target: Pauli) -> Self {
        Self {
            control,
            target,
            negative: false,
        }
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn occupation(&self) -> OccupationPair {
        OccupationPair {
            control: !self.control.is_identity(),
            target: !self.target.is_identity(),
        }
    }
}

/// Conjugate `σ_c ⊗ σ_t` by CNOT with the given control/target roles.
pub fn cnot_conjugate(pair: PauliPair) -> PauliPair {
    let (xc, zc) = pair.control.xz();
    let (xt, zt) = pair.target.xz();
    // phase rule of the symplectic CNOT update
    let flip = xc && zt && (xt == zc);
    PauliPair {
        control: Pauli::from_xz(xc, zc ^ zt),
        target: Pauli::from_xz(xt ^ xc, zt),
        negative: pair.negative ^ flip,
    }
}

/// Which of the two gate qubits carry a non-identity label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationPair {
    pub control: bool,
    pub target: bool,
}

impl OccupationPair {
    pub const ALL: [OccupationPair; 4] = [
        OccupationPair {
            control: false,
            target: false,
        },
        OccupationPair {
            control: false,
            target: true,
        },
        OccupationPair {
            control: true,
            target: false,
        },
        OccupationPair {
            control: true,
            target: true,
        },
    ];

    pub fn new(control: bool, target: bool) -> Self {
        Self { control, target }
    }

    /// `2 * control + target`, matching the order of [`OccupationPair::ALL`].
    pub fn code(self) -> usize {
        (usize::from(self.control) << 1) | usize::from(self.target)
    }

    pub fn from_code(code: usize) -> Self {
        Self::ALL[code & 3]
    }
}

/// Exact distribution of post-gate occupations, as counts out of 9.
///
/// Entry `k` is the weight of `OccupationPair::from_code(k)`.
pub fn local_transition_ninths(occ: OccupationPair) -> [u32; 4] {
    fn labels(occupied: bool) -> &'static [Pauli] {
        if occupied {
            &Pauli::NON_IDENTITY
        } else {
            &[Pauli::I]
        }
    }
    let ctl = labels(occ.control);
    let tgt = labels(occ.target);
    let weight = 9 / (ctl.len() * tgt.len()) as u32;
    let mut out = [0u32; 4];
    for &c in ctl {
        for &t in tgt {
            let image = cnot_conjugate(PauliPair::new(c, t));
            out[image.occupation().code()] += weight;
        }
    }
    out
}

/// Cached table of [`local_transition_ninths`] for all four inputs.
pub fn local_rule_table() -> &'static [[u32; 4]; 4] {
    static TABLE: OnceLock<[[u32; 4]; 4]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u32; 4]; 4];
        for (code, row) in t.iter_mut().enumerate() {
            *row = local_transition_ninths(OccupationPair::from_code(code));
        }
        t
    })
}

/// The induced distribution over post-gate occupations.
pub fn local_transition_distribution(occ: OccupationPair) -> Vec<(OccupationPair, f64)> {
    local_rule_table()[occ.code()]
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(code, &w)| (OccupationPair::from_code(code), f64::from(w) / 9.0))
        .collect()
}
