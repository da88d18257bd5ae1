use thiserror::Error;

/// Errors produced by graph ingestion, spectral computation, and detection.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty graph")]
    EmptyGraph,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("labels must be +1 or -1 (or 1/2 in label files)")]
    InvalidLabel,

    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenpair {index} did not converge within {applies} operator applications")]
    EigenNoConvergence { index: usize, applies: usize },

    #[error("infeasible degree target: edge probability {prob:.6} exceeds 1")]
    InfeasibleDegreeTarget { prob: f64 },

    #[error("no valid bipartition among enumerated candidates")]
    NoValidBipartition,

    #[error("degenerate embedding: the geometric estimator direction is identically zero")]
    DegenerateEmbedding,

    #[error("refusing brute-force enumeration for n = {n} (limit {limit})")]
    BruteForceTooLarge { n: usize, limit: usize },

    #[error("cannot open {path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
