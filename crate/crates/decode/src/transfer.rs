use xbeth_core::{Address, Amount256, LogEntry};

use crate::signature::transfer_topic;

/// Which token protocol shape a Transfer log matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenStandard {
    /// 3 topics and a 32-byte value word: the standard fungible shape.
    Erc20,
    /// 1 topic and a 96-byte data block carrying from/to/value unindexed.
    /// Non-conforming tokens emit this shape and are kept in the dataset.
    Erc20NonStandard,
    /// 4 topics, empty data; the last topic is the token id, not a value.
    Erc721,
}

impl TokenStandard {
    pub fn as_str(&self) -> &'static str {
        match self {
            TokenStandard::Erc20 => "erc20",
            TokenStandard::Erc20NonStandard => "erc20_nonstandard",
            TokenStandard::Erc721 => "erc721",
        }
    }
}

/// A successfully decoded token transfer event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedTransfer {
    pub standard: TokenStandard,
    /// Emitting contract.
    pub token: Address,
    pub from: Address,
    pub to: Address,
    /// Token value for ERC20 shapes; token id for ERC721.
    pub amount_or_token_id: Amount256,
    pub log_index: u32,
}

/// Why a log carrying the Transfer topic was not decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkipReason {
    /// Topic/data sizes match none of the three accepted shapes.
    ShapeMismatch,
    /// An address-position word had non-zero high bytes, so the indexed
    /// parameter cannot be an address.
    NonAddressWord,
}

/// Outcome of classifying one log entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Transfer(DecodedTransfer),
    /// topic0 absent or not the Transfer topic.
    NotATransfer,
    /// Transfer topic present but the log is unusable; callers count these.
    Skipped(SkipReason),
}

fn address_word(word: &[u8]) -> Option<Address> {
    let fixed: &[u8; 32] = word.try_into().ok()?;
    Address::from_word(fixed)
}

/// Classifies a log entry as an ERC20, non-standard ERC20, or ERC721
/// transfer by its (topic count, data length) shape. The three accepted
/// shapes are disjoint, so a log matches at most one standard. Unusable
/// logs are skipped, never fatal.
pub fn classify_transfer_log(log: &LogEntry) -> Classification {
    match log.topic0() {
        Some(t) if *t == transfer_topic() => {}
        _ => return Classification::NotATransfer,
    }

    let decoded = match (log.topics.len(), log.data.len()) {
        (3, 32) => {
            let (from, to) = match (address_word(&log.topics[1].0), address_word(&log.topics[2].0)) {
                (Some(f), Some(t)) => (f, t),
                _ => return Classification::Skipped(SkipReason::NonAddressWord),
            };
            DecodedTransfer {
                standard: TokenStandard::Erc20,
                token: log.address,
                from,
                to,
                amount_or_token_id: Amount256::from_be_word(&log.data.0[..32].try_into().unwrap()),
                log_index: log.log_index,
            }
        }
        (4, 0) => {
            let (from, to) = match (address_word(&log.topics[1].0), address_word(&log.topics[2].0)) {
                (Some(f), Some(t)) => (f, t),
                _ => return Classification::Skipped(SkipReason::NonAddressWord),
            };
            DecodedTransfer {
                standard: TokenStandard::Erc721,
                token: log.address,
                from,
                to,
                amount_or_token_id: Amount256::from_be_word(&log.topics[3].0),
                log_index: log.log_index,
            }
        }
        (1, 96) => {
            let (from, to) = match (address_word(&log.data.0[..32]), address_word(&log.data.0[32..64])) {
                (Some(f), Some(t)) => (f, t),
                _ => return Classification::Skipped(SkipReason::NonAddressWord),
            };
            DecodedTransfer {
                standard: TokenStandard::Erc20NonStandard,
                token: log.address,
                from,
                to,
                amount_or_token_id: Amount256::from_be_word(&log.data.0[64..96].try_into().unwrap()),
                log_index: log.log_index,
            }
        }
        _ => return Classification::Skipped(SkipReason::ShapeMismatch),
    };
    Classification::Transfer(decoded)
}
