use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("unsupported derivative index: {0}")]
    UnsupportedIndex(String),

    #[error("divergent prime sum: {0}")]
    Divergence(String),

    #[error("missing symbol value: {0}")]
    MissingSymbol(String),

    #[error("series inversion requires an invertible constant term")]
    Inversion,

    #[error("corrupt cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
