//! Random two-qubit circuits and the entanglement they generate.
//!
//! Three engines cross-check one another:
//!
//! * [`statevector`]: dense simulation of the Haar (or stabilizer) random
//!   circuit for small registers, with purity, entropy and Pauli expansions;
//! * [`markov`]: the Markov chain on Pauli supports, exact for `N ≤ 14` and by
//!   Monte Carlo for any `N`, from which `E[Tr ρ_A²] = 2^{N_B} Pr[S ⊆ A]`;
//! * [`stabilizer`]: a bit-packed tableau for the stabilizer gate set, reaching
//!   hundreds of qubits.
//!
//! [`spectral`] holds the gap machinery (exact gaps, the Dirichlet ratio and
//! the comparison walk) and [`analysis`] / [`experiment`] the bound checks,
//! histograms, total-variation curves and experiment drivers.

// `!(x >= 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod gates;
pub mod markov;
pub mod matrix;
pub mod partition;
pub mod pauli;
pub mod rng;
pub mod spectral;
pub mod stabilizer;
pub mod statevector;
pub mod stats;
pub mod subset;

pub use analysis::{CutoffReport, EntropyHistogram, TvCurve, TvPoint};
pub use error::{Error, Result};
pub use experiment::{Engine, Reference, Suite};
pub use gates::{CliffordGate, GateEvent, GateSet, SingleQubitGate};
pub use matrix::{DistributionVector, TransitionMatrix};
pub use partition::QubitPartition;
pub use pauli::{Pauli, PauliPair, PauliString};
pub use rng::RngStream;
pub use spectral::{GapMethod, GapReport};
pub use stabilizer::StabilizerTableau;
pub use statevector::StateVector;
pub use stats::Estimate;
pub use subset::SubsetState;
