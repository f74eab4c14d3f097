use thiserror::Error;

use xbeth_ingest::IngestError;

#[derive(Debug, Error)]
pub enum DatasetError {
    /// A bundle is internally inconsistent for dataset building (e.g. a
    /// transaction has no root trace).
    #[error("integrity error at block {block}: {reason}")]
    Integrity { block: u64, reason: String },

    /// Underlying archive or transport failure.
    #[error(transparent)]
    Ingest(#[from] IngestError),

    #[error("csv error in {file}: {reason}")]
    Csv { file: String, reason: String },

    /// A CSV cell did not parse back into its typed form.
    #[error("bad record in {file} row {row}: {reason}")]
    BadRecord { file: String, row: usize, reason: String },

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl DatasetError {
    pub fn integrity(block: u64, reason: impl Into<String>) -> DatasetError {
        DatasetError::Integrity { block, reason: reason.into() }
    }

    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> DatasetError {
        DatasetError::Io { path: path.to_string(), source }
    }
}
