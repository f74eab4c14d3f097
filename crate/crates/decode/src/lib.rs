//! Pure decoding primitives for the pipeline: signature hashing, function
//! selector extraction, Transfer-event classification, and miner extra-data
//! text decoding. Everything here is pure and safe for unrestricted
//! concurrent use.

mod keccak;
mod signature;
mod text;
mod transfer;

pub use keccak::keccak256;
pub use signature::{event_topic, extract_selector, transfer_topic, Selector};
pub use text::decode_extra_text;
pub use transfer::{classify_transfer_log, Classification, DecodedTransfer, SkipReason, TokenStandard};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    /// Event signatures must be canonical before hashing.
    #[error("event signature contains whitespace: {0:?}")]
    WhitespaceInSignature(String),
}
