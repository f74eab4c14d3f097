//! Domain types shared by ingestion, decoding, dataset building, and
//! statistics.
//!
//! All types are immutable after construction and safe to share between
//! concurrent workers. Canonical text encodings:
//!
//! - addresses: `0x` + 40 lowercase hex chars
//! - 32-byte ids: `0x` + 64 lowercase hex chars
//! - byte sequences: `0x` + even-length lowercase hex
//! - amounts: decimal digit strings with no leading zeros

mod amount;
mod block;
pub mod decimal;
mod error;
mod primitives;
mod receipt;
mod trace;

pub use amount::Amount256;
pub use block::{RawBlock, RawTransaction};
pub use error::CoreError;
pub use primitives::{Address, Bytes, Hash32};
pub use receipt::{LogEntry, ReceiptRecord};
pub use trace::{CallKind, CallTrace, CreateTrace, RewardKind, RewardTrace, SuicideTrace, TraceAction, TraceRecord};

/// Number of wei in one Ether (10^18).
pub const WEI_PER_ETHER: u128 = 1_000_000_000_000_000_000;
