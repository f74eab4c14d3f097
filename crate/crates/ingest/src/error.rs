use thiserror::Error;

/// Errors raised while acquiring, archiving, or replaying raw chain data.
#[derive(Debug, Error)]
pub enum IngestError {
    /// Transport-level failure after the configured retries were exhausted.
    #[error("transport failure talking to {url} after {attempts} attempts: {reason}")]
    Transport { url: String, attempts: u32, reason: String },

    /// The requested height is beyond the served chain head.
    #[error("block {height} not found (beyond chain head?)")]
    NotFound { height: u64 },

    /// Application-level JSON-RPC error.
    #[error("rpc method {method} failed: {code} {message}")]
    Rpc { method: &'static str, code: i64, message: String },

    /// A malformed JSON-RPC response body.
    #[error("malformed response for {method}: {reason}")]
    BadResponse { method: &'static str, reason: String },

    /// A bundle violated one of its structural invariants.
    #[error("integrity error at block {block}: {reason}")]
    Integrity { block: u64, reason: String },

    /// The archive lacks a height inside the requested range.
    #[error("missing block {height} in raw archive")]
    MissingBlock { height: u64 },

    #[error("invalid range: from {from} > to {to}")]
    InvalidRange { from: u64, to: u64 },

    #[error("archive I/O error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("corrupt archive line in {path}: {reason}")]
    CorruptLine { path: String, reason: String },
}

impl IngestError {
    pub fn integrity(block: u64, reason: impl Into<String>) -> IngestError {
        IngestError::Integrity { block, reason: reason.into() }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> IngestError {
        IngestError::Io { path: path.into(), source }
    }
}
