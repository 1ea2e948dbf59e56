use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::category`] groups variants the way the command-line front end
/// reports them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("points of the tropical projective torus need dimension at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("data set is empty")]
    EmptyData,

    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },

    #[error("weight {} is {value}, not strictly positive", index + 1)]
    NonPositiveWeight { index: usize, value: String },

    #[error("weights sum to {0}, not 1")]
    WeightSum(String),

    #[error("invalid covector graph: {0}")]
    InvalidGraph(String),

    #[error("covector cell is empty")]
    EmptyCell,

    #[error("covector cell is unbounded")]
    UnboundedCell,

    #[error("graph is not the covector graph of a bounded cell: {0}")]
    NotBoundedCell(String),

    #[error("could not realize the cell as a Fermat-Weber set: {0}")]
    Unrealizable(String),

    #[error("transportation instance is unbalanced: supplies sum to {supply}, demands to {demand}")]
    Unbalanced { supply: String, demand: String },

    #[error("invalid transportation instance: {0}")]
    InvalidInstance(String),

    #[error("instance too large for exhaustive enumeration: m*n = {product} exceeds {limit}")]
    ScaleGuard { product: usize, limit: usize },

    #[error("three-point condition fails for leaves {0}, {1}, {2}")]
    NotUltrametric(usize, usize, usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("trees do not share a leaf set: {0}")]
    LeafSetMismatch(String),

    #[error("solver failure: {0}")]
    Solver(String),
}

/// Coarse error classes, one per failure mode surfaced to users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Validation,
    Infeasible,
    ScaleGuard,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse(_) => ErrorCategory::Parse,
            Error::EmptyCell
            | Error::UnboundedCell
            | Error::NotBoundedCell(_)
            | Error::Unrealizable(_)
            | Error::Solver(_) => ErrorCategory::Infeasible,
            Error::ScaleGuard { .. } => ErrorCategory::ScaleGuard,
            _ => ErrorCategory::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
