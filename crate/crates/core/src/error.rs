use std::path::PathBuf;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vector norm is at or below the zero threshold")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector has no components")]
    EmptyVector,
    #[error("non-finite value at component {index}")]
    NonFinite { index: usize },
    #[error("every input vector collapsed during orthogonalization")]
    AllDegenerate,
    #[error("residual vanished: input is parallel to the removed direction")]
    DegenerateResidual,
    #[error("k = {k} is outside 1..={max}")]
    InvalidK { k: usize, max: usize },
    #[error("least-squares system is numerically singular (condition {condition:e})")]
    SingularSystem { condition: f64 },
    #[error("corpus has no documents")]
    EmptyCorpus,
    #[error("only {found} candidate tokens in the frequency interval, {needed} needed")]
    InsufficientCandidates { found: usize, needed: usize },
    #[error("cannot split {tokens} triggers into {subsets} nonempty subsets")]
    TooManySubsets { tokens: usize, subsets: usize },
    #[error("cannot orthogonalize {count} targets in dimension {dim}")]
    TooManyWatermarks { count: usize, dim: usize },
    #[error("{triggers} triggers are too few for {count} watermarks (need at least {needed})")]
    TooFewTriggers {
        triggers: usize,
        count: usize,
        needed: usize,
    },
    #[error("watermark mix has vanishing norm")]
    DegenerateMix,
    #[error("{} ids have no document: {}", .0.len(), preview(.0))]
    MissingDocument(Vec<String>),
    #[error("benign vocabulary is empty after removing triggers")]
    EmptyBenignVocab,
    #[error("KS test needs at least 2 samples per side (got {a} and {b})")]
    TooFewSamples { a: usize, b: usize },
    #[error("{clusters} clusters requested for {rows} rows")]
    TooManyClusters { clusters: usize, rows: usize },
    #[error("id mismatch: {0}")]
    IdMismatch(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("probe {id} could not be embedded: {reason}")]
    Embedder { id: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

fn preview(ids: &[String]) -> String {
    let mut s = ids.iter().take(5).cloned().collect::<Vec<_>>().join(", ");
    if ids.len() > 5 {
        s.push_str(", ...");
    }
    s
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Coarse category used by the command line for exit codes.
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            Io { .. } => ErrorCategory::Io,
            InsufficientCandidates { .. } | TooManySubsets { .. } | TooFewTriggers { .. } => {
                ErrorCategory::Triggers
            }
            IdMismatch(_) | MissingDocument(_) | DuplicateId(_) => ErrorCategory::Ids,
            _ => ErrorCategory::Config,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Io,
    Triggers,
    Ids,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
