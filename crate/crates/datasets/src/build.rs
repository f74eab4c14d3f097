//! Single-pass construction of the six datasets from a bundle stream.
//!
//! Builders may run over disjoint block ranges in parallel; outputs
//! concatenate in range order because every sort key starts with the block
//! number. Only the dataset-3 creation/deletion join needs a global pass,
//! so the per-range stage emits raw contract events and `join_contract_rows`
//! runs after the merge.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use xbeth_core::decimal::div_decimal_half_even;
use xbeth_core::{Address, Amount256, Bytes, Hash32, TraceAction, TraceRecord};
use xbeth_decode::{classify_transfer_log, extract_selector, Classification, SkipReason, TokenStandard};
use xbeth_ingest::BlockBundle;

use crate::error::DatasetError;
use crate::rows::*;

/// Which datasets a run should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetSelection {
    pub d1: bool,
    pub d2: bool,
    pub d3: bool,
    pub d4: bool,
    pub d5: bool,
    pub d6: bool,
}

impl Default for DatasetSelection {
    fn default() -> Self {
        DatasetSelection::all()
    }
}

impl DatasetSelection {
    pub fn all() -> DatasetSelection {
        DatasetSelection { d1: true, d2: true, d3: true, d4: true, d5: true, d6: true }
    }

    pub fn none() -> DatasetSelection {
        DatasetSelection { d1: false, d2: false, d3: false, d4: false, d5: false, d6: false }
    }

    /// Parses a `--datasets 1,2,5` style selection list.
    pub fn from_list(list: &str) -> Result<DatasetSelection, String> {
        let mut sel = DatasetSelection::none();
        for part in list.split(',') {
            match part.trim() {
                "1" => sel.d1 = true,
                "2" => sel.d2 = true,
                "3" => sel.d3 = true,
                "4" => sel.d4 = true,
                "5" => sel.d5 = true,
                "6" => sel.d6 = true,
                "" => {}
                other => return Err(format!("unknown dataset {other:?} (expected 1-6)")),
            }
        }
        if sel == DatasetSelection::none() {
            return Err("empty dataset selection".to_string());
        }
        Ok(sel)
    }
}

/// Logs and traces the builders deliberately dropped, kept for reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkipReport {
    /// Transfer-topic logs whose (topic count, data length) shape matches
    /// no accepted class.
    pub transfer_shape_mismatch: u64,
    /// Transfer-topic logs with a non-zero-padded address word.
    pub transfer_non_address_word: u64,
    /// Create traces excluded for their own error, a missing result
    /// address, or an errored ancestor frame.
    pub failed_creates: u64,
    /// Suicide traces excluded for their own or an ancestor's error.
    pub reverted_suicides: u64,
}

impl SkipReport {
    pub fn absorb(&mut self, other: &SkipReport) {
        self.transfer_shape_mismatch += other.transfer_shape_mismatch;
        self.transfer_non_address_word += other.transfer_non_address_word;
        self.failed_creates += other.failed_creates;
        self.reverted_suicides += other.reverted_suicides;
    }
}

/// A contract creation observed in the range, pre-join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CreateEvent {
    pub address: Address,
    pub creator: Address,
    pub block: u64,
    pub tx_hash: Hash32,
    pub initial_value: Amount256,
    pub creation_code: Bytes,
    pub deployed_code: Bytes,
}

/// An effective contract deletion observed in the range, pre-join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuicideEvent {
    pub address: Address,
    pub refund_address: Address,
    pub balance: Amount256,
    pub block: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractEvent {
    Created(CreateEvent),
    Deleted(SuicideEvent),
}

/// Everything one builder pass produced. Row vectors are already in final
/// per-range order.
#[derive(Debug, Default)]
pub struct BuildOutput {
    pub blocks: Vec<BlockRow>,
    pub txs: Vec<TxRow>,
    pub internal: Vec<InternalEtherTxRow>,
    pub contract_events: Vec<ContractEvent>,
    pub calls: Vec<ContractCallRow>,
    pub erc20: Vec<Erc20TransferRow>,
    pub erc721: Vec<Erc721TransferRow>,
    pub skips: SkipReport,
}

impl BuildOutput {
    /// Concatenates per-range outputs in range order.
    pub fn merge(parts: Vec<BuildOutput>) -> BuildOutput {
        let mut merged = BuildOutput::default();
        for part in parts {
            merged.blocks.extend(part.blocks);
            merged.txs.extend(part.txs);
            merged.internal.extend(part.internal);
            merged.contract_events.extend(part.contract_events);
            merged.calls.extend(part.calls);
            merged.erc20.extend(part.erc20);
            merged.erc721.extend(part.erc721);
            merged.skips.absorb(&part.skips);
        }
        merged
    }
}

pub struct DatasetBuilder {
    selection: DatasetSelection,
    out: BuildOutput,
}

impl DatasetBuilder {
    pub fn new(selection: DatasetSelection) -> DatasetBuilder {
        DatasetBuilder { selection, out: BuildOutput::default() }
    }

    pub fn finish(self) -> BuildOutput {
        self.out
    }

    pub fn add_bundle(&mut self, bundle: &BlockBundle) -> Result<(), DatasetError> {
        let n = bundle.block.number;
        let sel = self.selection;

        // traces grouped per transaction, depth-first by trace address
        let mut per_tx: HashMap<Hash32, Vec<&TraceRecord>> = HashMap::new();
        for trace in &bundle.traces {
            if let Some(hash) = trace.tx_hash {
                per_tx.entry(hash).or_default().push(trace);
            }
        }
        for traces in per_tx.values_mut() {
            traces.sort_by(|a, b| a.trace_address.cmp(&b.trace_address));
        }

        if sel.d1 {
            self.out.blocks.push(block_row(bundle));
        }

        let mut log_keys: HashSet<u32> = HashSet::new();

        for (i, tx) in bundle.block.transactions.iter().enumerate() {
            let receipt = &bundle.receipts[i];
            let traces = per_tx.get(&tx.hash).map(Vec::as_slice).unwrap_or(&[]);
            let root = traces.iter().find(|t| t.trace_address.is_empty());
            let Some(root) = root else {
                return Err(DatasetError::integrity(n, format!("no root trace for transaction {}", tx.hash)));
            };

            // addresses of frames that carry their own error
            let errored: HashSet<&[u32]> =
                traces.iter().filter(|t| t.has_error()).map(|t| t.trace_address.as_slice()).collect();
            let blocked = |addr: &[u32]| (0..=addr.len()).any(|k| errored.contains(&addr[..k]));

            if sel.d1 {
                let miner_reward = Amount256::from(receipt.gas_used)
                    .checked_mul(&tx.gas_price)
                    .map_err(|_| DatasetError::integrity(n, format!("fee overflow for {}", tx.hash)))?;
                self.out.txs.push(TxRow {
                    tx_hash: tx.hash,
                    block_number: n,
                    tx_index: tx.transaction_index,
                    from: tx.from,
                    to: tx.to,
                    value: tx.value.clone(),
                    gas_price: tx.gas_price.clone(),
                    gas_used: receipt.gas_used,
                    miner_reward,
                    input_size: tx.input.len() as u64,
                    error: root.error.clone(),
                });
            }

            for trace in traces {
                match &trace.action {
                    TraceAction::Call(call) => {
                        if sel.d4 {
                            self.out.calls.push(ContractCallRow {
                                block_number: n,
                                tx_hash: tx.hash,
                                trace_address: trace.trace_address.clone(),
                                call_type: call.call_type,
                                from: call.from,
                                to: call.to,
                                selector: extract_selector(call.input.as_slice()),
                                input_size: call.input.len() as u64,
                                value_wei: call.value.clone(),
                                gas_used: call.gas_used,
                                error: trace.error.clone(),
                            });
                        }
                        if sel.d2 && !call.value.is_zero() && !blocked(&trace.trace_address) {
                            self.out.internal.push(InternalEtherTxRow {
                                block_number: n,
                                tx_hash: tx.hash,
                                trace_address: trace.trace_address.clone(),
                                kind: InternalKind::CallValue,
                                from: call.from,
                                to: call.to,
                                value_wei: call.value.clone(),
                            });
                        }
                    }
                    TraceAction::Create(create) => {
                        if !sel.d3 {
                            continue;
                        }
                        let succeeded =
                            !trace.has_error() && create.result_address.is_some() && !blocked(&trace.trace_address);
                        if let (true, Some(address)) = (succeeded, create.result_address) {
                            self.out.contract_events.push(ContractEvent::Created(CreateEvent {
                                address,
                                creator: create.from,
                                block: n,
                                tx_hash: tx.hash,
                                initial_value: create.value.clone(),
                                creation_code: create.init_code.clone(),
                                deployed_code: create.deployed_code.clone().unwrap_or_default(),
                            }));
                        } else {
                            self.out.skips.failed_creates += 1;
                        }
                    }
                    TraceAction::Suicide(suicide) => {
                        if blocked(&trace.trace_address) {
                            self.out.skips.reverted_suicides += 1;
                            continue;
                        }
                        if sel.d3 {
                            self.out.contract_events.push(ContractEvent::Deleted(SuicideEvent {
                                address: suicide.address,
                                refund_address: suicide.refund_address,
                                balance: suicide.balance.clone(),
                                block: n,
                            }));
                        }
                        if sel.d2 && !suicide.balance.is_zero() {
                            self.out.internal.push(InternalEtherTxRow {
                                block_number: n,
                                tx_hash: tx.hash,
                                trace_address: trace.trace_address.clone(),
                                kind: InternalKind::SuicideRefund,
                                from: suicide.address,
                                to: suicide.refund_address,
                                value_wei: suicide.balance.clone(),
                            });
                        }
                    }
                    TraceAction::Reward(_) => unreachable!("reward traces carry no tx hash"),
                }
            }

            if sel.d5 || sel.d6 {
                for log in &receipt.logs {
                    match classify_transfer_log(log) {
                        Classification::Transfer(t) => {
                            if !log_keys.insert(log.log_index) {
                                return Err(DatasetError::integrity(
                                    n,
                                    format!("duplicate log index {} in block", log.log_index),
                                ));
                            }
                            match t.standard {
                                TokenStandard::Erc20 | TokenStandard::Erc20NonStandard if sel.d5 => {
                                    self.out.erc20.push(Erc20TransferRow {
                                        token: t.token,
                                        from: t.from,
                                        to: t.to,
                                        value: t.amount_or_token_id,
                                        block_number: n,
                                        tx_hash: tx.hash,
                                        log_index: t.log_index,
                                    });
                                }
                                TokenStandard::Erc721 if sel.d6 => {
                                    self.out.erc721.push(Erc721TransferRow {
                                        token: t.token,
                                        from: t.from,
                                        to: t.to,
                                        token_id: t.amount_or_token_id,
                                        block_number: n,
                                        tx_hash: tx.hash,
                                        log_index: t.log_index,
                                    });
                                }
                                _ => {}
                            }
                        }
                        Classification::Skipped(SkipReason::ShapeMismatch) => {
                            self.out.skips.transfer_shape_mismatch += 1;
                        }
                        Classification::Skipped(SkipReason::NonAddressWord) => {
                            self.out.skips.transfer_non_address_word += 1;
                        }
                        Classification::NotATransfer => {}
                    }
                }
            }
        }
        Ok(())
    }
}

fn block_row(bundle: &BlockBundle) -> BlockRow {
    let block = &bundle.block;
    let prices: Vec<&Amount256> = block.transactions.iter().map(|tx| &tx.gas_price).collect();
    let (min, avg, max) = if prices.is_empty() {
        (None, None, None)
    } else {
        let min = prices.iter().min().unwrap();
        let max = prices.iter().max().unwrap();
        let sum = prices.iter().fold(BigUint::from(0u8), |acc, p| acc + p.as_biguint());
        let avg = div_decimal_half_even(&sum, &BigUint::from(prices.len() as u64), 2);
        (Some((*min).clone()), Some(avg), Some((*max).clone()))
    };
    BlockRow {
        number: block.number,
        hash: block.hash,
        miner: block.miner,
        timestamp: block.timestamp,
        gas_limit: block.gas_limit,
        gas_used: block.gas_used,
        size: block.size,
        extra_data: block.extra_data.clone(),
        tx_count: block.transactions.len() as u32,
        gas_price_min: min,
        gas_price_avg: avg,
        gas_price_max: max,
    }
}

/// Global creation/deletion join: rows appear in the order their
/// introducing event was seen; the first effective suicide at or after a
/// creation closes that row. A deletion with no open creation in range
/// becomes an `unseen_creation` row. A re-created address opens a fresh
/// row, keyed by its own creation.
pub fn join_contract_rows(events: &[ContractEvent]) -> Vec<ContractInfoRow> {
    let mut rows: Vec<ContractInfoRow> = Vec::new();
    let mut open: HashMap<Address, usize> = HashMap::new();
    for event in events {
        match event {
            ContractEvent::Created(c) => {
                rows.push(ContractInfoRow {
                    contract_address: c.address,
                    creator: Some(c.creator),
                    creation_block: Some(c.block),
                    creation_tx_hash: Some(c.tx_hash),
                    initial_value: Some(c.initial_value.clone()),
                    creation_code: Some(c.creation_code.clone()),
                    deployed_code: Some(c.deployed_code.clone()),
                    deployed_code_size_bytes: Some(c.deployed_code.len() as u64),
                    deleted: false,
                    deletion_block: None,
                    refund_address: None,
                    refund_value: None,
                    unseen_creation: false,
                });
                open.insert(c.address, rows.len() - 1);
            }
            ContractEvent::Deleted(s) => match open.remove(&s.address) {
                Some(index) => {
                    let row = &mut rows[index];
                    row.deleted = true;
                    row.deletion_block = Some(s.block);
                    row.refund_address = Some(s.refund_address);
                    row.refund_value = Some(s.balance.clone());
                }
                None => rows.push(ContractInfoRow {
                    contract_address: s.address,
                    creator: None,
                    creation_block: None,
                    creation_tx_hash: None,
                    initial_value: None,
                    creation_code: None,
                    deployed_code: None,
                    deployed_code_size_bytes: None,
                    deleted: true,
                    deletion_block: Some(s.block),
                    refund_address: Some(s.refund_address),
                    refund_value: Some(s.balance.clone()),
                    unseen_creation: true,
                }),
            },
        }
    }
    rows
}

fn build(bundles: &[BlockBundle], selection: DatasetSelection) -> Result<BuildOutput, DatasetError> {
    let mut builder = DatasetBuilder::new(selection);
    for bundle in bundles {
        builder.add_bundle(bundle)?;
    }
    Ok(builder.finish())
}

pub fn build_dataset1(bundles: &[BlockBundle]) -> Result<(Vec<BlockRow>, Vec<TxRow>), DatasetError> {
    let out = build(bundles, DatasetSelection { d1: true, ..DatasetSelection::none() })?;
    Ok((out.blocks, out.txs))
}

pub fn build_dataset2(bundles: &[BlockBundle]) -> Result<Vec<InternalEtherTxRow>, DatasetError> {
    Ok(build(bundles, DatasetSelection { d2: true, ..DatasetSelection::none() })?.internal)
}

pub fn build_dataset3(bundles: &[BlockBundle]) -> Result<Vec<ContractInfoRow>, DatasetError> {
    let out = build(bundles, DatasetSelection { d3: true, ..DatasetSelection::none() })?;
    Ok(join_contract_rows(&out.contract_events))
}

pub fn build_dataset4(bundles: &[BlockBundle]) -> Result<Vec<ContractCallRow>, DatasetError> {
    Ok(build(bundles, DatasetSelection { d4: true, ..DatasetSelection::none() })?.calls)
}

pub fn build_dataset5(
    bundles: &[BlockBundle],
    metadata: Option<&dyn crate::metadata::TokenMetadataSource>,
) -> Result<(Vec<Erc20TransferRow>, Vec<TokenMetadataRow>), DatasetError> {
    let out = build(bundles, DatasetSelection { d5: true, ..DatasetSelection::none() })?;
    let tokens = crate::metadata::token_metadata_rows(&out.erc20, metadata);
    Ok((out.erc20, tokens))
}

pub fn build_dataset6(bundles: &[BlockBundle]) -> Result<Vec<Erc721TransferRow>, DatasetError> {
    Ok(build(bundles, DatasetSelection { d6: true, ..DatasetSelection::none() })?.erc721)
}
