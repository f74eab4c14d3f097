use serde::{Deserialize, Serialize};

use crate::{Address, Amount256, Bytes, Hash32};

/// On-chain block header plus transaction bodies, in the shape a client
/// RPC delivers them (after canonicalization of all text encodings).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RawBlock {
    pub number: u64,
    pub hash: Hash32,
    pub parent_hash: Hash32,
    pub miner: Address,
    /// Seconds since epoch.
    pub timestamp: u64,
    pub gas_limit: u64,
    pub gas_used: u64,
    /// Block size in bytes.
    pub size: u64,
    /// Miner's free-text field, at most 32 bytes.
    pub extra_data: Bytes,
    /// Ordered by in-block index starting at 0.
    pub transactions: Vec<RawTransaction>,
}

/// Transaction body as found in a block. `to` is absent exactly when the
/// transaction deploys a contract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RawTransaction {
    pub hash: Hash32,
    /// In-block position.
    pub transaction_index: u32,
    pub from: Address,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<Address>,
    /// Transferred value in wei.
    pub value: Amount256,
    /// Gas limit of the transaction.
    pub gas: u64,
    /// Offered price in wei per gas unit.
    pub gas_price: Amount256,
    pub input: Bytes,
    pub nonce: u64,
}

impl RawTransaction {
    pub fn is_deployment(&self) -> bool {
        self.to.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_tx() -> RawTransaction {
        RawTransaction {
            hash: Hash32([0x11; 32]),
            transaction_index: 0,
            from: Address([0x22; 20]),
            to: None,
            value: Amount256::zero(),
            gas: 300_000,
            gas_price: Amount256::from(20_000_000_000u64),
            input: Bytes(vec![0x60, 0x80]),
            nonce: 7,
        }
    }

    #[test]
    fn deployment_omits_to_field() {
        let tx = sample_tx();
        assert!(tx.is_deployment());
        let json = serde_json::to_string(&tx).unwrap();
        assert!(!json.contains("\"to\""));
        let back: RawTransaction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tx);
    }

    #[test]
    fn block_round_trips() {
        let block = RawBlock {
            number: 5,
            hash: Hash32([0xaa; 32]),
            parent_hash: Hash32([0xab; 32]),
            miner: Address([0x01; 20]),
            timestamp: 1_500_000_000,
            gas_limit: 8_000_000,
            gas_used: 21_000,
            size: 1234,
            extra_data: Bytes(b"nanopool".to_vec()),
            transactions: vec![sample_tx()],
        };
        let json = serde_json::to_string(&block).unwrap();
        let back: RawBlock = serde_json::from_str(&json).unwrap();
        assert_eq!(back, block);
    }
}
