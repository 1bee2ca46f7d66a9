use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("Gram matrix is not even: entry ({row},{col}) = {value}")]
    NotEven { row: usize, col: usize, value: String },
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("Gram matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector {0} is not in the dual lattice")]
    NotInDual(String),
    #[error("vector {0} is not in the lattice")]
    NotInLattice(String),
    #[error("phase {value} needs a root of unity of order dividing {required}, field has order {order}")]
    IncompatibleOrder {
        value: String,
        order: u64,
        required: String,
    },
    #[error("coset mismatch: {0}")]
    CosetMismatch(String),
    #[error("fusion violation: {0}")]
    FusionViolation(String),
    #[error("lattice is not positive definite")]
    IndefiniteLattice,
    #[error("series window too small: need exponents from {needed_min} to {needed_max}")]
    InsufficientWindow { needed_min: String, needed_max: String },
    #[error("weak commutativity order {given} too small; minimal order is {minimal}")]
    WeakCommutativityOrder { given: i64, minimal: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotEven { .. } => "NotEven",
            Error::Degenerate => "Degenerate",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotInDual(_) => "NotInDual",
            Error::NotInLattice(_) => "NotInLattice",
            Error::IncompatibleOrder { .. } => "IncompatibleOrder",
            Error::CosetMismatch(_) => "CosetMismatch",
            Error::FusionViolation(_) => "FusionViolation",
            Error::IndefiniteLattice => "IndefiniteLattice",
            Error::InsufficientWindow { .. } => "InsufficientWindow",
            Error::WeakCommutativityOrder { .. } => "WeakCommutativityOrder",
            Error::Parse(_) => "Parse",
        }
    }
}
