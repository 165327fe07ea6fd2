//! Gate events of the random circuit and their samplers.
//!
//! One step applies `u_control` on the control qubit, `u_target` on the
//! target qubit, then `CNOT[control, target]`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

const UNITARY_TOL: f64 = 1e-10;

/// Which single-qubit ensemble the circuit draws from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateSet {
    /// Haar measure on U(2).
    Haar,
    /// Uniform over {X, Y, Z, S, H}.
    Stabilizer,
}

/// The five single-qubit gates of the stabilizer variant.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    X,
    Y,
    Z,
    S,
    H,
}

impl CliffordGate {
    pub const ALL: [CliffordGate; 5] = [
        CliffordGate::X,
        CliffordGate::Y,
        CliffordGate::Z,
        CliffordGate::S,
        CliffordGate::H,
    ];

    pub fn matrix(self) -> Mat2 {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            CliffordGate::X => [[o, l], [l, o]],
            CliffordGate::Y => [[o, -i], [i, o]],
            CliffordGate::Z => [[l, o], [o, -l]],
            CliffordGate::S => [[l, o], [o, i]],
            CliffordGate::H => [[h, h], [h, -h]],
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SingleQubitGate {
    Clifford(CliffordGate),
    General(Mat2),
}

impl SingleQubitGate {
    pub fn identity() -> Self {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        SingleQubitGate::General([[l, o], [o, l]])
    }

    pub fn matrix(&self) -> Mat2 {
        match self {
            SingleQubitGate::Clifford(g) => g.matrix(),
            SingleQubitGate::General(m) => *m,
        }
    }

    pub fn as_clifford(&self) -> Option<CliffordGate> {
        match self {
            SingleQubitGate::Clifford(g) => Some(*g),
            SingleQubitGate::General(_) => None,
        }
    }
}

impl From<CliffordGate> for SingleQubitGate {
    fn from(g: CliffordGate) -> Self {
        SingleQubitGate::Clifford(g)
    }
}

/// `U U†` minus identity, max-abs entry.
pub fn unitarity_defect(u: &Mat2) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let dot: C64 = (0..2).map(|k| u[r][k] * u[c][k].conj()).sum();
            let expected = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((dot - expected).norm());
        }
    }
    worst
}

/// One step of the random circuit. Indices are 0-based.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GateEvent {
    control: usize,
    target: usize,
    u_control: SingleQubitGate,
    u_target: SingleQubitGate,
}

impl GateEvent {
    pub fn new(
        control: usize,
        target: usize,
        u_control: SingleQubitGate,
        u_target: SingleQubitGate,
    ) -> Result<Self> {
        if control == target {
            return Err(Error::SameControlTarget(control));
        }
        for u in [&u_control, &u_target] {
            if let SingleQubitGate::General(m) = u {
                let defect = unitarity_defect(m);
                if !(defect <= UNITARY_TOL) {
                    return Err(Error::InvalidArgument(format!(
                        "single-qubit gate is not unitary (defect {defect:e})"
                    )));
                }
            }
        }
        Ok(Self {
            control,
            target,
            u_control,
            u_target,
        })
    }

    pub fn control(&self) -> usize {
        self.control
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn u_control(&self) -> &SingleQubitGate {
        &self.u_control
    }

    pub fn u_target(&self) -> &SingleQubitGate {
        &self.u_target
    }

    pub fn check_range(&self, n_qubits: usize) -> Result<()> {
        for index in [self.control, self.target] {
            if index >= n_qubits {
                return Err(Error::QubitOutOfRange { index, n_qubits });
            }
        }
        Ok(())
    }
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random element of U(2).
///
/// Gram-Schmidt on a complex Ginibre matrix; the implied R factor has a
/// positive real diagonal, which makes the law exactly invariant.
pub fn sample_haar_u2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let (a, b, c, d) = (
        gaussian_c64(rng),
        gaussian_c64(rng),
        gaussian_c64(rng),
        gaussian_c64(rng),
    );
    let n1 = (a.norm_sqr() + c.norm_sqr()).sqrt();
    let (v0, v1) = (a / n1, c / n1);
    let proj = v0.conj() * b + v1.conj() * d;
    let (w0, w1) = (b - proj * v0, d - proj * v1);
    let n2 = (w0.norm_sqr() + w1.norm_sqr()).sqrt();
    [[v0, w0 / n2], [v1, w1 / n2]]
}

/// Uniform ordered pair of distinct qubits.
pub fn sample_pair<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> (usize, usize) {
    let c = rng.random_range(0..n_qubits);
    let mut t = rng.random_range(0..n_qubits - 1);
    if t >= c {
        t += 1;
    }
    (c, t)
}

pub fn sample_single<R: Rng + ?Sized>(rng: &mut R, gate_set: GateSet) -> SingleQubitGate {
    match gate_set {
        GateSet::Haar => SingleQubitGate::General(sample_haar_u2(rng)),
        GateSet::Stabilizer => SingleQubitGate::Clifford(CliffordGate::ALL[rng.random_range(0..5)]),
    }
}

/// Draw one gate event: the pair first, then the control and target gates.
pub fn sample_gate_event<R: Rng + ?Sized>(
    rng: &mut R,
    n_qubits: usize,
    gate_set: GateSet,
) -> Result<GateEvent> {
    if n_qubits < 2 {
        return Err(Error::TooFewQubits(n_qubits));
    }
    let (control, target) = sample_pair(rng, n_qubits);
    let u_control = sample_single(rng, gate_set);
    let u_target = sample_single(rng, gate_set);
    Ok(GateEvent {
        control,
        target,
        u_control,
        u_target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn haar_draws_are_unitary() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            assert!(unitarity_defect(&sample_haar_u2(&mut rng)) < 1e-10);
        }
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = RngStream::new(2, 0);
        let draws = 100_000;
        let mean: f64 = (0..draws)
            .map(|_| sample_haar_u2(&mut rng)[0][0].norm_sqr())
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 0.5).abs() < 0.01, "{mean}");
    }

    #[test]
    fn haar_twirl_value() {
        // (Tr U Z U† Z)^2 / 4 averages to 1/3 under Haar
        let mut rng = RngStream::new(3, 0);
        let draws = 100_000;
        let z = CliffordGate::Z.matrix();
        let mut acc = 0.0;
        for _ in 0..draws {
            let u = sample_haar_u2(&mut rng);
            // Tr(U Z U† Z) = Σ_{j,k} U_jk z_k conj(U_jk) z_j
            let mut tr = C64::new(0.0, 0.0);
            for j in 0..2 {
                for k in 0..2 {
                    tr += u[j][k] * z[k][k] * u[j][k].conj() * z[j][j];
                }
            }
            acc += tr.re * tr.re / 4.0;
        }
        let mean = acc / draws as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn pair_frequencies_n2() {
        let mut rng = RngStream::new(4, 0);
        let draws = 100_000;
        let hits = (0..draws)
            .filter(|_| {
                sample_gate_event(&mut rng, 2, GateSet::Haar)
                    .unwrap()
                    .control()
                    == 0
            })
            .count();
        assert!((hits as f64 / draws as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn stabilizer_gate_frequencies() {
        let mut rng = RngStream::new(5, 0);
        let draws = 100_000;
        let mut counts = [[0usize; 5]; 2];
        for _ in 0..draws {
            let g = sample_gate_event(&mut rng, 4, GateSet::Stabilizer).unwrap();
            for (slot, u) in [g.u_control(), g.u_target()].into_iter().enumerate() {
                let c = u.as_clifford().unwrap();
                counts[slot][CliffordGate::ALL.iter().position(|&x| x == c).unwrap()] += 1;
            }
        }
        for slot in counts {
            for c in slot {
                assert!((c as f64 / draws as f64 - 0.2).abs() < 0.01);
            }
        }
    }

    #[test]
    fn rejects_single_qubit_register() {
        let mut rng = RngStream::new(6, 0);
        assert_eq!(
            sample_gate_event(&mut rng, 1, GateSet::Haar),
            Err(Error::TooFewQubits(1))
        );
    }

    #[test]
    fn rejects_invalid_events() {
        let id = SingleQubitGate::identity();
        assert!(GateEvent::new(1, 1, id, id).is_err());
        let o = C64::new(0.0, 0.0);
        let two = C64::new(2.0, 0.0);
        assert!(GateEvent::new(0, 1, SingleQubitGate::General([[two, o], [o, two]]), id).is_err());
        assert!(GateEvent::new(0, 3, id, id)
            .unwrap()
            .check_range(3)
            .is_err());
    }

    #[test]
    fn clifford_matrices_are_unitary() {
        for g in CliffordGate::ALL {
            assert!(unitarity_defect(&g.matrix()) < 1e-15);
        }
    }
}
