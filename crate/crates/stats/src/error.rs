use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    /// The block statistics need at least one block row.
    #[error("empty input: no block rows to report on")]
    EmptyReport,

    /// Throughput needs a positive mean block time.
    #[error("division guard: mean block time is zero")]
    ZeroBlockTime,

    /// Input rows contradict each other (e.g. timestamps run backwards).
    #[error("invalid input data: {0}")]
    InvalidData(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}
