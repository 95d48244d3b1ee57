use thiserror::Error;

use crate::network::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {}", join_diagnostics(.0))]
    InvalidNetwork(Vec<Diagnostic>),

    #[error("cell {cell} receives more than one arrow of color {color}")]
    DuplicateInputColor { cell: String, color: String },

    #[error("invalid input maps: {0}")]
    InvalidInputMaps(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition is not balanced")]
    NotBalanced,

    #[error("problem too large: {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("cannot compose fibrations: target {first} differs from source {second}")]
    CompositionMismatch { first: String, second: String },

    #[error("double fundamental network is not isomorphic: {0}")]
    IsoFailure(String),

    #[error("product undefined: {0}")]
    SignatureError(String),

    #[error("invalid response function: {0}")]
    InvalidResponse(String),

    #[error("state left the admissible region at t = {t}")]
    NonFinite { t: f64 },

    #[error("{value} is not an eigenvalue")]
    NotAnEigenvalue { value: f64 },

    #[error("branch assembly is ambiguous at lambda = {lambda}")]
    BranchAssemblyAmbiguous { lambda: f64 },

    #[error("genericity condition fails: {0}")]
    Genericity(String),

    #[error("insufficient data: {found} usable samples, need {needed}")]
    InsufficientData { found: usize, needed: usize },

    #[error("not an interior symmetry: {0}")]
    NotInteriorSymmetry(String),

    #[error("unknown cell {0}")]
    UnknownCell(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}
