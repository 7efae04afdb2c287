use thiserror::Error;

/// Errors produced by configuration construction and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid observable character {0:?} (expected I, X, Y or Z)")]
    InvalidCharacter(char),
    #[error("empty observable string")]
    EmptyObservable,
    #[error("all-identity observable does not encode a point")]
    ZeroPoint,
    #[error("qubit count {0} out of supported range 1..=32")]
    QubitCountOutOfRange(usize),
    #[error("bitvector 0x{bits:x} does not fit in {qubits} qubits")]
    BitsOutOfRange { bits: u64, qubits: usize },
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("dimension k={k} out of range for rank N={n}")]
    DimensionOutOfRange { n: usize, k: usize },
    #[error("points {0} and {1} do not commute")]
    NonCommuting(String, String),
    #[error("product of context points is {0}, not proportional to the identity")]
    ProductNotIdentity(String),
    #[error("context product has imaginary phase i^{0}; the context is malformed")]
    ImaginaryPhase(u8),
    #[error("basis is linearly dependent or not totally isotropic")]
    BadBasis,
    #[error("embedding slot {0} invalid for {1} qubits")]
    BadEmbedding(usize, usize),
    #[error("configuration is not a doily: {0}")]
    NotADoily(String),
    #[error("assignment length {0} does not match {1} observables")]
    AssignmentLength(usize, usize),
    #[error("degree {d} exceeds context count {l}")]
    DegreeExceedsContexts { l: usize, d: usize },
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("external solver failed: {0}")]
    Solver(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
