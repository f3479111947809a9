use thiserror::Error;

/// Errors raised by the algebraic and combinatorial routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("operands live over different fields (F_{0} vs F_{1})")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("subspace is not stable under the operator")]
    NotStable,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not an invertible self-adjoint matrix")]
    NotInGIotaTheta,
    #[error("matrix is not of the block form diag(x, 1)")]
    NotInA,
    #[error("invalid exotic pair: {0}")]
    InvalidPair(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("rank mismatch: labels of size {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("compositions have unequal totals {0} and {1}")]
    UnequalTotals(usize, usize),
    #[error("bipartition is empty")]
    EmptyBipartition,
    #[error("enhanced type {0} is not of doubled form")]
    NotDoubled(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("parameter out of range: {0}")]
    RangeError(String),
    #[error("size gate: {0}")]
    SizeGate(String),
    #[error("correspondence under-determined at rank {rank}: {detail}")]
    AmbiguousAssignment { rank: usize, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
