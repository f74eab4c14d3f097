use serde::{Deserialize, Serialize};

use crate::{Address, Bytes, Hash32};

/// Indexed output of a contract. `topics[0]`, when present, is the hash of
/// the event's canonical signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LogEntry {
    /// Emitting contract.
    pub address: Address,
    /// 0 to 4 32-byte words.
    pub topics: Vec<Hash32>,
    pub data: Bytes,
    /// Position within the block's log stream.
    pub log_index: u32,
}

/// Post-execution outcome of one transaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReceiptRecord {
    pub transaction_hash: Hash32,
    pub block_number: u64,
    pub gas_used: u64,
    /// Running gas total of the block up to and including this transaction.
    pub cumulative_gas_used: u64,
    /// Set for deployment transactions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contract_address: Option<Address>,
    pub logs: Vec<LogEntry>,
}

impl LogEntry {
    pub fn topic0(&self) -> Option<&Hash32> {
        self.topics.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn receipt_round_trips() {
        let receipt = ReceiptRecord {
            transaction_hash: Hash32([0x42; 32]),
            block_number: 99,
            gas_used: 21_000,
            cumulative_gas_used: 42_000,
            contract_address: Some(Address([0x33; 20])),
            logs: vec![LogEntry {
                address: Address([0x44; 20]),
                topics: vec![Hash32([0x55; 32])],
                data: Bytes(vec![0u8; 32]),
                log_index: 3,
            }],
        };
        let json = serde_json::to_string(&receipt).unwrap();
        let back: ReceiptRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, receipt);
    }
}
