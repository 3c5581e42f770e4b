use thiserror::Error;

/// Errors raised by the simulation and estimation routines.
#[derive(Debug, Error)]
pub enum GapError {
    #[error("{n} qubits exceeds the dense limit of {max} (set GAPSCOPE_MAX_DENSE_QUBITS to raise it)")]
    DenseLimit { n: usize, max: usize },

    #[error("{n} qubits exceeds the statevector limit of {max}")]
    StateLimit { n: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("term {0} cannot be compiled to native gates")]
    UnsupportedTerm(String),

    #[error("operator is not diagonal in the computational basis: {0}")]
    NonDiagonal(String),

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("series is constant; frequency undefined")]
    FrequencyUndefined,

    #[error("time grid is not uniform")]
    NonUniformGrid,

    #[error("observable must be a single ±1-valued Pauli string for shot sampling")]
    ObservableNotSampleable,

    #[error("backend cannot run this circuit: {0}")]
    Backend(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GapError>;
