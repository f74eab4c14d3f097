//! Per-operation behavior of the dataset builders on hand-built bundles.

use xbeth_core::{
    Address, Amount256, Bytes, CallKind, CallTrace, CreateTrace, Hash32, LogEntry, RawBlock, RawTransaction,
    ReceiptRecord, SuicideTrace, TraceAction, TraceRecord,
};
use xbeth_datasets::*;
use xbeth_decode::transfer_topic;
use xbeth_ingest::BlockBundle;

fn addr(b: u8) -> Address {
    Address([b; 20])
}

fn hash(b: u8) -> Hash32 {
    Hash32([b; 32])
}

fn topic_for(a: Address) -> Hash32 {
    let mut word = [0u8; 32];
    word[12..].copy_from_slice(a.as_bytes());
    Hash32(word)
}

struct TxSpec {
    hash: Hash32,
    from: Address,
    to: Option<Address>,
    value: Amount256,
    gas_price: Amount256,
    gas_used: u64,
    input: Bytes,
    traces: Vec<TraceRecord>,
    logs: Vec<LogEntry>,
}

impl TxSpec {
    fn transfer(hash_byte: u8, from: Address, to: Address, value: u64) -> TxSpec {
        let h = hash(hash_byte);
        TxSpec {
            hash: h,
            from,
            to: Some(to),
            value: Amount256::from(value),
            gas_price: Amount256::from(20_000_000_000u64),
            gas_used: 21_000,
            input: Bytes::new(),
            traces: vec![TraceRecord {
                block_number: 0,
                tx_hash: Some(h),
                trace_address: vec![],
                error: None,
                action: TraceAction::Call(CallTrace {
                    call_type: CallKind::Call,
                    from,
                    to,
                    value: Amount256::from(value),
                    input: Bytes::new(),
                    gas_used: 21_000,
                    output: Bytes::new(),
                }),
            }],
            logs: vec![],
        }
    }
}

fn block_of(number: u64, txs: Vec<TxSpec>) -> BlockBundle {
    let mut transactions = Vec::new();
    let mut receipts = Vec::new();
    let mut traces = Vec::new();
    let mut cumulative = 0u64;
    let mut log_index = 0u32;
    for (i, mut spec) in txs.into_iter().enumerate() {
        transactions.push(RawTransaction {
            hash: spec.hash,
            transaction_index: i as u32,
            from: spec.from,
            to: spec.to,
            value: spec.value.clone(),
            gas: spec.gas_used + 30_000,
            gas_price: spec.gas_price.clone(),
            input: spec.input.clone(),
            nonce: i as u64,
        });
        cumulative += spec.gas_used;
        let logs: Vec<LogEntry> = spec
            .logs
            .drain(..)
            .map(|mut log| {
                log.log_index = log_index;
                log_index += 1;
                log
            })
            .collect();
        receipts.push(ReceiptRecord {
            transaction_hash: spec.hash,
            block_number: number,
            gas_used: spec.gas_used,
            cumulative_gas_used: cumulative,
            contract_address: None,
            logs,
        });
        for mut trace in spec.traces {
            trace.block_number = number;
            traces.push(trace);
        }
    }
    BlockBundle::new(
        RawBlock {
            number,
            hash: Hash32([number as u8; 32]),
            parent_hash: Hash32::ZERO,
            miner: addr(0x99),
            timestamp: 1_500_000_000 + number * 15,
            gas_limit: 8_000_000,
            gas_used: cumulative,
            size: 1_000,
            extra_data: Bytes::new(),
            transactions,
        },
        receipts,
        traces,
    )
    .unwrap()
}

#[test]
fn empty_block_yields_bare_block_row() {
    let bundles = vec![block_of(0, vec![])];
    let (blocks, txs) = build_dataset1(&bundles).unwrap();
    assert_eq!(txs.len(), 0);
    assert_eq!(blocks.len(), 1);
    let row = &blocks[0];
    assert_eq!(row.tx_count, 0);
    assert_eq!(row.gas_price_min, None);
    assert_eq!(row.gas_price_avg, None);
    assert_eq!(row.gas_price_max, None);
    let rec = row.to_record();
    assert_eq!(&rec[9..12], &["", "", ""]);
}

#[test]
fn miner_reward_is_gas_used_times_gas_price() {
    let bundles = vec![block_of(0, vec![TxSpec::transfer(1, addr(1), addr(2), 100)])];
    let (_, txs) = build_dataset1(&bundles).unwrap();
    assert_eq!(txs[0].miner_reward, Amount256::from(420_000_000_000_000u64));
}

#[test]
fn gas_price_stats_cover_min_avg_max() {
    let mut a = TxSpec::transfer(1, addr(1), addr(2), 1);
    a.gas_price = Amount256::from(10u64);
    let mut b = TxSpec::transfer(2, addr(1), addr(2), 1);
    b.gas_price = Amount256::from(21u64);
    let (blocks, _) = build_dataset1(&[block_of(0, vec![a, b])]).unwrap();
    let row = &blocks[0];
    assert_eq!(row.gas_price_min, Some(Amount256::from(10u64)));
    assert_eq!(row.gas_price_avg.as_deref(), Some("15.50"));
    assert_eq!(row.gas_price_max, Some(Amount256::from(21u64)));
}

#[test]
fn errored_transfer_produces_no_internal_row() {
    let mut tx = TxSpec::transfer(1, addr(1), addr(2), 5_000_000);
    tx.traces[0].error = Some("Reverted".to_string());
    let rows = build_dataset2(&[block_of(0, vec![tx])]).unwrap();
    assert!(rows.is_empty());
}

#[test]
fn errored_ancestor_blocks_descendant_transfers() {
    let mut tx = TxSpec::transfer(1, addr(1), addr(3), 0);
    // root call errors; its child moves value but must be excluded
    tx.traces[0].error = Some("Out of gas".to_string());
    tx.traces.push(TraceRecord {
        block_number: 0,
        tx_hash: Some(tx.hash),
        trace_address: vec![0],
        error: None,
        action: TraceAction::Call(CallTrace {
            call_type: CallKind::Call,
            from: addr(3),
            to: addr(4),
            value: Amount256::from(7u64),
            input: Bytes::new(),
            gas_used: 400,
            output: Bytes::new(),
        }),
    });
    let bundles = vec![block_of(0, vec![tx])];
    assert!(build_dataset2(&bundles).unwrap().is_empty());
    // ...while dataset 4 keeps both calls
    assert_eq!(build_dataset4(&bundles).unwrap().len(), 2);
}

#[test]
fn zero_balance_suicide_skips_dataset2_but_marks_deletion() {
    let mut tx = TxSpec::transfer(1, addr(1), addr(2), 0);
    tx.traces.push(TraceRecord {
        block_number: 0,
        tx_hash: Some(tx.hash),
        trace_address: vec![0],
        error: None,
        action: TraceAction::Suicide(SuicideTrace {
            address: addr(7),
            refund_address: addr(8),
            balance: Amount256::zero(),
        }),
    });
    let bundles = vec![block_of(0, vec![tx])];
    assert!(build_dataset2(&bundles).unwrap().is_empty());
    let contracts = build_dataset3(&bundles).unwrap();
    assert_eq!(contracts.len(), 1);
    assert!(contracts[0].deleted);
    assert!(contracts[0].unseen_creation);
    assert_eq!(contracts[0].refund_value, Some(Amount256::zero()));
}

fn create_tx(hash_byte: u8, creator: Address, contract: Address, code_len: usize, error: Option<&str>) -> TxSpec {
    let h = hash(hash_byte);
    let failed = error.is_some();
    TxSpec {
        hash: h,
        from: creator,
        to: None,
        value: Amount256::zero(),
        gas_price: Amount256::from(1_000_000_000u64),
        gas_used: 150_000,
        input: Bytes(vec![0x60; 10]),
        traces: vec![TraceRecord {
            block_number: 0,
            tx_hash: Some(h),
            trace_address: vec![],
            error: error.map(str::to_string),
            action: TraceAction::Create(CreateTrace {
                from: creator,
                value: Amount256::zero(),
                init_code: Bytes(vec![0x60; 10]),
                result_address: (!failed).then_some(contract),
                deployed_code: (!failed).then(|| Bytes(vec![0xfe; code_len])),
                gas_used: 100_000,
            }),
        }],
        logs: vec![],
    }
}

fn suicide_tx(hash_byte: u8, caller: Address, contract: Address, refund: Address, balance: u64) -> TxSpec {
    let mut tx = TxSpec::transfer(hash_byte, caller, contract, 0);
    tx.traces.push(TraceRecord {
        block_number: 0,
        tx_hash: Some(tx.hash),
        trace_address: vec![0],
        error: None,
        action: TraceAction::Suicide(SuicideTrace {
            address: contract,
            refund_address: refund,
            balance: Amount256::from(balance),
        }),
    });
    tx
}

#[test]
fn failed_create_yields_no_contract_row() {
    let bundles = vec![block_of(0, vec![create_tx(1, addr(1), addr(0xc0), 100, Some("Bad instruction"))])];
    assert!(build_dataset3(&bundles).unwrap().is_empty());
}

#[test]
fn create_then_suicide_joins_into_one_row() {
    let bundles = vec![
        block_of(0, vec![create_tx(1, addr(1), addr(0xc0), 958, None)]),
        block_of(1, vec![suicide_tx(2, addr(1), addr(0xc0), addr(9), 5_000)]),
    ];
    let rows = build_dataset3(&bundles).unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row.creator, Some(addr(1)));
    assert_eq!(row.creation_block, Some(0));
    assert_eq!(row.deployed_code_size_bytes, Some(958));
    assert!(row.deleted);
    assert_eq!(row.deletion_block, Some(1));
    assert_eq!(row.refund_address, Some(addr(9)));
    assert_eq!(row.refund_value, Some(Amount256::from(5_000u64)));
    assert!(!row.unseen_creation);
}

#[test]
fn recreated_address_keeps_both_lifecycles() {
    let contract = addr(0xc0);
    let bundles = vec![
        block_of(0, vec![create_tx(1, addr(1), contract, 10, None)]),
        block_of(1, vec![suicide_tx(2, addr(1), contract, addr(9), 0)]),
        block_of(2, vec![create_tx(3, addr(2), contract, 20, None)]),
        block_of(3, vec![suicide_tx(4, addr(2), contract, addr(8), 0)]),
    ];
    let rows = build_dataset3(&bundles).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].creation_block, Some(0));
    assert_eq!(rows[0].deletion_block, Some(1));
    assert_eq!(rows[1].creation_block, Some(2));
    assert_eq!(rows[1].deletion_block, Some(3));
    assert_eq!(rows[1].creator, Some(addr(2)));
}

#[test]
fn plain_value_call_has_no_selector_and_overlaps_dataset2() {
    let bundles = vec![block_of(0, vec![TxSpec::transfer(1, addr(1), addr(2), 42)])];
    let calls = build_dataset4(&bundles).unwrap();
    assert_eq!(calls.len(), 1);
    assert_eq!(calls[0].selector, None);
    assert_eq!(calls[0].input_size, 0);
    let internal = build_dataset2(&bundles).unwrap();
    assert_eq!(internal.len(), 1);
    assert_eq!(internal[0].value_wei, Amount256::from(42u64));
    assert_eq!(internal[0].kind, InternalKind::CallValue);
    assert_eq!(internal[0].trace_address, Vec::<u32>::new());
}

#[test]
fn errored_call_keeps_label_in_dataset4() {
    let mut tx = TxSpec::transfer(1, addr(1), addr(2), 0);
    tx.traces[0].error = Some("Bad jump destination".to_string());
    let calls = build_dataset4(&[block_of(0, vec![tx])]).unwrap();
    assert_eq!(calls[0].error.as_deref(), Some("Bad jump destination"));
}

fn erc20_log(token: Address, from: Address, to: Address, value: u64) -> LogEntry {
    let mut data = vec![0u8; 32];
    data[24..].copy_from_slice(&value.to_be_bytes());
    LogEntry {
        address: token,
        topics: vec![transfer_topic(), topic_for(from), topic_for(to)],
        data: Bytes(data),
        log_index: 0,
    }
}

fn erc721_log(token: Address, from: Address, to: Address, id: u64) -> LogEntry {
    let mut id_word = [0u8; 32];
    id_word[24..].copy_from_slice(&id.to_be_bytes());
    LogEntry {
        address: token,
        topics: vec![transfer_topic(), topic_for(from), topic_for(to), Hash32(id_word)],
        data: Bytes::new(),
        log_index: 0,
    }
}

#[test]
fn log_shapes_partition_between_datasets_5_and_6() {
    let token20 = addr(0xaa);
    let token721 = addr(0xbb);
    let mut tx = TxSpec::transfer(1, addr(1), addr(2), 0);
    tx.logs = vec![
        erc20_log(token20, addr(1), addr(2), 500),
        erc721_log(token721, Address::ZERO, addr(2), 7),
    ];
    let bundles = vec![block_of(0, vec![tx])];

    let (erc20, tokens) = build_dataset5(&bundles, None).unwrap();
    assert_eq!(erc20.len(), 1, "the 4-topic log stays out of dataset 5");
    assert_eq!(erc20[0].token, token20);
    assert_eq!(erc20[0].value, Amount256::from(500u64));
    // no endpoint: metadata rows carry addresses only
    assert_eq!(tokens.len(), 1);
    assert_eq!(tokens[0], TokenMetadataRow::bare(token20));

    let erc721 = build_dataset6(&bundles).unwrap();
    assert_eq!(erc721.len(), 1, "the 3-topic log stays out of dataset 6");
    assert_eq!(erc721[0].token, token721);
    assert_eq!(erc721[0].token_id, Amount256::from(7u64));
    assert!(erc721[0].from.is_zero(), "mints keep the zero from-address");
}

#[test]
fn duplicate_log_index_is_integrity_error() {
    let mut tx = TxSpec::transfer(1, addr(1), addr(2), 0);
    tx.logs = vec![erc20_log(addr(0xaa), addr(1), addr(2), 1), erc20_log(addr(0xaa), addr(1), addr(2), 2)];
    let mut bundle = block_of(0, vec![tx]);
    bundle.receipts[0].logs[1].log_index = 0; // collide after construction
    let err = build_dataset5(&[bundle], None).unwrap_err();
    assert!(err.to_string().contains("duplicate log index"), "{err}");
}

#[test]
fn missing_root_trace_is_integrity_error() {
    let mut tx = TxSpec::transfer(1, addr(1), addr(2), 5);
    tx.traces.clear();
    let err = build_dataset1(&[block_of(0, vec![tx])]).unwrap_err();
    assert!(err.to_string().contains("no root trace"), "{err}");
}

#[test]
fn selection_list_parses() {
    let sel = DatasetSelection::from_list("1,3, 6").unwrap();
    assert!(sel.d1 && sel.d3 && sel.d6);
    assert!(!sel.d2 && !sel.d4 && !sel.d5);
    assert!(DatasetSelection::from_list("7").is_err());
    assert!(DatasetSelection::from_list("").is_err());
}
