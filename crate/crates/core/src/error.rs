use thiserror::Error;

/// Errors raised by the simulation kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("register of {0} qubits exceeds the dense-simulation cap of {cap}", cap = crate::tol::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("perturbation is not traceless (|tr|/N = {0:e})")]
    NotTraceless(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("length mismatch for {what}: expected {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
