use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    SameQubit(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("sampled a measurement branch with zero probability")]
    ZeroProbabilityBranch,
    #[error("invalid measurement graph: {0}")]
    InvalidGraph(String),
    #[error("missing outcome for vertex {0}")]
    MissingOutcome(usize),
    #[error("protocol order violation: {0}")]
    ProtocolOrder(String),
    #[error("vertex {0} measured before it was entangled")]
    Unentangled(usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid detector pattern (m+={plus}, m-={minus})")]
    InvalidDetectorPattern { plus: bool, minus: bool },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("corruption payload missing while a corruption flag is set")]
    MissingCorruption,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("label mismatch between distributions")]
    LabelMismatch,
    #[error("invalid config: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
