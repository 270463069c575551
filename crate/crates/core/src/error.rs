use thiserror::Error;

/// Errors raised by the simulator and the protocol drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit count {0} outside supported range 1..={max}", max = crate::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("operator {0} is not Hermitian")]
    NotHermitian(String),

    #[error("operators {0} and {1} do not commute")]
    NonCommuting(String, String),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("requested measurement branch has zero probability")]
    ZeroProbability,

    #[error("polarization vector {0:?} lies outside the Bloch ball")]
    OutsideBlochBall([f64; 3]),

    #[error("polarization vector {0:?} lies outside the stabilizer octahedron")]
    OutsideOctahedron([f64; 3]),

    #[error("error probability {0} outside [0, 1/2]")]
    EpsilonOutOfRange(f64),

    #[error("subspace of dimension {0} is too large to enumerate")]
    TooLarge(usize),

    #[error("ancilla is not of the form (|0> + e^(i theta)|1>)/sqrt(2)")]
    MalformedAncilla,

    #[error("qubit {0} is entangled with the rest of the register")]
    Entangled(usize),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
