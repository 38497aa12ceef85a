use thiserror::Error;

/// Errors raised by the qubit-baker library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} is outside the supported range 1..={max}", max = crate::lattice::MAX_QUBITS)]
    QubitCount(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dot position {n} out of range for {qubits} qubits (allowed {min}..={qubits})")]
    DotPosition { n: usize, qubits: usize, min: usize },

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid bit value {0}; bits must be 0 or 1")]
    InvalidBit(u8),

    #[error("malformed label {0:?}: {1}")]
    MalformedLabel(String, &'static str),

    #[error("cannot shift: the right-hand window is empty")]
    EmptyWindow,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized (norm deviation {0:e})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("cut {cut} out of range 1..{qubits}")]
    CutOutOfRange { cut: usize, qubits: usize },

    #[error("requested {steps} steps but the label has only {available} position bits")]
    DotExhausted { steps: usize, available: usize },

    #[error("{qubits} qubits exceeds the dense cap of {cap}")]
    DenseCap { qubits: usize, cap: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("eigen decomposition did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
