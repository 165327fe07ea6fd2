use thiserror::Error;

/// Errors raised by the simulation engines and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("need at least 2 qubits to place a two-qubit gate, got {0}")]
    TooFewQubits(usize),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("control and target must differ (both {0})")]
    SameControlTarget(usize),

    #[error("{what}: {n_qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("gate is not in the stabilizer gate set")]
    NonClifford,

    #[error(
        "matrix is not reversible with respect to the given distribution (worst violation {0:e})"
    )]
    NotReversible(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("test function is constant on the state space")]
    ConstantFunction,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
