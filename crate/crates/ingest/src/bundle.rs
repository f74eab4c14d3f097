use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use xbeth_core::{RawBlock, ReceiptRecord, TraceAction, TraceRecord};

use crate::error::IngestError;

/// Everything the pipeline keeps for one height: the block with its
/// transactions, the per-transaction receipts, and all execution traces
/// including reward traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBundle {
    pub block: RawBlock,
    pub receipts: Vec<ReceiptRecord>,
    pub traces: Vec<TraceRecord>,
}

impl BlockBundle {
    /// Assembles a bundle, enforcing its structural invariants.
    pub fn new(block: RawBlock, receipts: Vec<ReceiptRecord>, traces: Vec<TraceRecord>) -> Result<BlockBundle, IngestError> {
        let bundle = BlockBundle { block, receipts, traces };
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn height(&self) -> u64 {
        self.block.number
    }

    /// Checks the invariants every archived bundle must satisfy:
    /// receipts correspond 1:1 with transactions in index order, cumulative
    /// gas never decreases, every trace belongs to a known transaction, and
    /// trace addresses form parent-linked trees.
    pub fn validate(&self) -> Result<(), IngestError> {
        let n = self.block.number;

        if self.receipts.len() != self.block.transactions.len() {
            return Err(IngestError::integrity(
                n,
                format!(
                    "receipt count {} != transaction count {}",
                    self.receipts.len(),
                    self.block.transactions.len()
                ),
            ));
        }
        let mut last_cumulative = 0u64;
        for (tx, receipt) in self.block.transactions.iter().zip(&self.receipts) {
            if receipt.transaction_hash != tx.hash {
                return Err(IngestError::integrity(
                    n,
                    format!("receipt order mismatch at index {}: {} != {}", tx.transaction_index, receipt.transaction_hash, tx.hash),
                ));
            }
            if receipt.block_number != n {
                return Err(IngestError::integrity(n, format!("receipt {} carries block number {}", tx.hash, receipt.block_number)));
            }
            if receipt.cumulative_gas_used < last_cumulative {
                return Err(IngestError::integrity(n, format!("cumulative gas decreases at {}", tx.hash)));
            }
            last_cumulative = receipt.cumulative_gas_used;
        }

        let known: HashSet<_> = self.block.transactions.iter().map(|tx| tx.hash).collect();
        let mut per_tx_addresses: HashMap<_, HashSet<&[u32]>> = HashMap::new();
        for trace in &self.traces {
            if trace.block_number != n {
                return Err(IngestError::integrity(n, format!("trace carries block number {}", trace.block_number)));
            }
            match (&trace.action, trace.tx_hash) {
                (TraceAction::Reward(_), _) => {
                    // shape enforced at parse time: no tx hash, empty address
                }
                (_, Some(hash)) => {
                    if !known.contains(&hash) {
                        return Err(IngestError::integrity(n, format!("orphan trace for unknown transaction {hash}")));
                    }
                    per_tx_addresses.entry(hash).or_default().insert(&trace.trace_address);
                }
                (_, None) => {
                    return Err(IngestError::integrity(n, "non-reward trace without a transaction hash"));
                }
            }
        }
        for (hash, addresses) in &per_tx_addresses {
            for address in addresses {
                if address.is_empty() {
                    continue;
                }
                let parent = &address[..address.len() - 1];
                if !addresses.contains(parent) {
                    return Err(IngestError::integrity(
                        n,
                        format!("trace {:?} of {} has no parent trace", address, hash),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use xbeth_core::{Address, Amount256, Bytes, CallKind, CallTrace, Hash32, RawTransaction, RewardKind, RewardTrace};

    fn tx(hash_byte: u8, index: u32) -> RawTransaction {
        RawTransaction {
            hash: Hash32([hash_byte; 32]),
            transaction_index: index,
            from: Address([1; 20]),
            to: Some(Address([2; 20])),
            value: Amount256::zero(),
            gas: 21_000,
            gas_price: Amount256::from(1u64),
            input: Bytes::new(),
            nonce: 0,
        }
    }

    fn receipt(hash_byte: u8, cumulative: u64) -> ReceiptRecord {
        ReceiptRecord {
            transaction_hash: Hash32([hash_byte; 32]),
            block_number: 1,
            gas_used: 21_000,
            cumulative_gas_used: cumulative,
            contract_address: None,
            logs: vec![],
        }
    }

    fn call_trace(hash_byte: u8, addr: Vec<u32>) -> TraceRecord {
        TraceRecord {
            block_number: 1,
            tx_hash: Some(Hash32([hash_byte; 32])),
            trace_address: addr,
            error: None,
            action: TraceAction::Call(CallTrace {
                call_type: CallKind::Call,
                from: Address([1; 20]),
                to: Address([2; 20]),
                value: Amount256::zero(),
                input: Bytes::new(),
                gas_used: 100,
                output: Bytes::new(),
            }),
        }
    }

    fn block(txs: Vec<RawTransaction>) -> RawBlock {
        RawBlock {
            number: 1,
            hash: Hash32([0xbb; 32]),
            parent_hash: Hash32([0xaa; 32]),
            miner: Address([9; 20]),
            timestamp: 1_500_000_015,
            gas_limit: 8_000_000,
            gas_used: 42_000,
            size: 600,
            extra_data: Bytes::new(),
            transactions: txs,
        }
    }

    #[test]
    fn receipt_count_mismatch_is_integrity_error() {
        let err = BlockBundle::new(block(vec![tx(1, 0), tx(2, 1)]), vec![receipt(1, 21_000)], vec![]).unwrap_err();
        assert!(err.to_string().contains("receipt count 1 != transaction count 2"), "{err}");
    }

    #[test]
    fn decreasing_cumulative_gas_rejected() {
        let err = BlockBundle::new(
            block(vec![tx(1, 0), tx(2, 1)]),
            vec![receipt(1, 40_000), receipt(2, 30_000)],
            vec![call_trace(1, vec![]), call_trace(2, vec![])],
        )
        .unwrap_err();
        assert!(err.to_string().contains("cumulative gas decreases"), "{err}");
    }

    #[test]
    fn orphan_trace_rejected() {
        let err = BlockBundle::new(block(vec![tx(1, 0)]), vec![receipt(1, 21_000)], vec![call_trace(7, vec![])]).unwrap_err();
        assert!(err.to_string().contains("orphan trace"), "{err}");
    }

    #[test]
    fn child_without_parent_rejected() {
        let err = BlockBundle::new(
            block(vec![tx(1, 0)]),
            vec![receipt(1, 21_000)],
            vec![call_trace(1, vec![]), call_trace(1, vec![0, 0])],
        )
        .unwrap_err();
        assert!(err.to_string().contains("no parent trace"), "{err}");
    }

    #[test]
    fn valid_bundle_with_reward_passes() {
        let reward = TraceRecord {
            block_number: 1,
            tx_hash: None,
            trace_address: vec![],
            error: None,
            action: TraceAction::Reward(RewardTrace {
                author: Address([9; 20]),
                value: Amount256::from(2_000_000_000_000_000_000u128),
                reward_type: RewardKind::Block,
            }),
        };
        let bundle = BlockBundle::new(
            block(vec![tx(1, 0)]),
            vec![receipt(1, 21_000)],
            vec![call_trace(1, vec![]), call_trace(1, vec![0]), reward],
        );
        assert!(bundle.is_ok(), "{bundle:?}");
    }
}
