use sha2::{Digest, Sha256};

use xbeth_core::{Address, Amount256, Bytes, Hash32, RawBlock, RawTransaction, ReceiptRecord, RewardKind, RewardTrace, TraceAction, TraceRecord};
use xbeth_ingest::{read_file_bytes, read_raw, write_archive, BlockBundle, IngestError};

fn hash(n: u64, salt: u8) -> Hash32 {
    let mut h = [salt; 32];
    h[..8].copy_from_slice(&n.to_be_bytes());
    Hash32(h)
}

fn bundle(height: u64, tx_count: usize) -> BlockBundle {
    let miner = Address([0x99; 20]);
    let transactions: Vec<RawTransaction> = (0..tx_count)
        .map(|i| RawTransaction {
            hash: hash(height * 100 + i as u64, 0x70),
            transaction_index: i as u32,
            from: Address([0x10 + i as u8; 20]),
            to: Some(Address([0x20; 20])),
            value: Amount256::from(1_000_000_000u64),
            gas: 21_000,
            gas_price: Amount256::from(20_000_000_000u64),
            input: Bytes::new(),
            nonce: i as u64,
        })
        .collect();
    let receipts: Vec<ReceiptRecord> = transactions
        .iter()
        .enumerate()
        .map(|(i, tx)| ReceiptRecord {
            transaction_hash: tx.hash,
            block_number: height,
            gas_used: 21_000,
            cumulative_gas_used: 21_000 * (i as u64 + 1),
            contract_address: None,
            logs: vec![],
        })
        .collect();
    let mut traces: Vec<TraceRecord> = transactions
        .iter()
        .map(|tx| TraceRecord {
            block_number: height,
            tx_hash: Some(tx.hash),
            trace_address: vec![],
            error: None,
            action: TraceAction::Call(xbeth_core::CallTrace {
                call_type: xbeth_core::CallKind::Call,
                from: tx.from,
                to: tx.to.unwrap(),
                value: tx.value.clone(),
                input: Bytes::new(),
                gas_used: 21_000,
                output: Bytes::new(),
            }),
        })
        .collect();
    traces.push(TraceRecord {
        block_number: height,
        tx_hash: None,
        trace_address: vec![],
        error: None,
        action: TraceAction::Reward(RewardTrace {
            author: miner,
            value: Amount256::from(2_000_000_000_000_000_000u128),
            reward_type: RewardKind::Block,
        }),
    });
    BlockBundle::new(
        RawBlock {
            number: height,
            hash: hash(height, 0xb0),
            parent_hash: if height == 0 { Hash32::ZERO } else { hash(height - 1, 0xb0) },
            miner,
            timestamp: 1_500_000_000 + height * 15,
            gas_limit: 8_000_000,
            gas_used: 21_000 * tx_count as u64,
            size: 800,
            extra_data: Bytes(b"testpool".to_vec()),
            transactions,
        },
        receipts,
        traces,
    )
    .unwrap()
}

#[test]
fn write_then_read_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let bundles: Vec<BlockBundle> = (0..11).map(|h| bundle(h, (h % 3) as usize)).collect();
    let written = write_archive(dir.path(), bundles.clone(), false).unwrap();
    assert_eq!(written, 11);

    let back: Result<Vec<BlockBundle>, _> = read_raw(dir.path(), 0, 10).unwrap().collect();
    assert_eq!(back.unwrap(), bundles);

    // sub-range read
    let middle: Vec<BlockBundle> = read_raw(dir.path(), 3, 5).unwrap().map(Result::unwrap).collect();
    assert_eq!(middle, bundles[3..=5]);
}

#[test]
fn gzip_archive_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let bundles: Vec<BlockBundle> = (0..4).map(|h| bundle(h, 1)).collect();
    write_archive(dir.path(), bundles.clone(), true).unwrap();
    assert!(dir.path().join("raw-0-9999.jsonl.gz").is_file());
    let back: Vec<BlockBundle> = read_raw(dir.path(), 0, 3).unwrap().map(Result::unwrap).collect();
    assert_eq!(back, bundles);
}

#[test]
fn missing_height_names_first_gap() {
    let dir = tempfile::tempdir().unwrap();
    let bundles: Vec<BlockBundle> = (0..11).filter(|h| *h != 7).map(|h| bundle(h, 1)).collect();
    write_archive(dir.path(), bundles, false).unwrap();

    let mut stream = read_raw(dir.path(), 0, 10).unwrap();
    for _ in 0..7 {
        stream.next().unwrap().unwrap();
    }
    match stream.next() {
        Some(Err(IngestError::MissingBlock { height })) => assert_eq!(height, 7),
        other => panic!("expected missing block 7, got {other:?}"),
    }
    assert!(stream.next().is_none(), "stream ends after the error");
}

#[test]
fn absent_segment_reports_first_height() {
    let dir = tempfile::tempdir().unwrap();
    match read_raw(dir.path(), 5, 9).unwrap().next() {
        Some(Err(IngestError::MissingBlock { height })) => assert_eq!(height, 5),
        other => panic!("expected missing block 5, got {other:?}"),
    }
}

#[test]
fn tampered_receipt_count_is_integrity_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut b = bundle(0, 2);
    b.receipts.pop(); // bypass the constructor check by mutating after build
    let line = serde_json::to_string(&b).unwrap();
    std::fs::write(dir.path().join("raw-0-9999.jsonl"), format!("{line}\n")).unwrap();

    match read_raw(dir.path(), 0, 0).unwrap().next() {
        Some(Err(IngestError::Integrity { block, reason })) => {
            assert_eq!(block, 0);
            assert!(reason.contains("receipt count"), "{reason}");
        }
        other => panic!("expected integrity error, got {other:?}"),
    }
}

#[test]
fn spans_segment_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    let bundles: Vec<BlockBundle> = (9_998..10_003).map(|h| bundle(h, 1)).collect();
    write_archive(dir.path(), bundles.clone(), false).unwrap();
    assert!(dir.path().join("raw-0-9999.jsonl").is_file());
    assert!(dir.path().join("raw-10000-19999.jsonl").is_file());
    let back: Vec<BlockBundle> = read_raw(dir.path(), 9_998, 10_002).unwrap().map(Result::unwrap).collect();
    assert_eq!(back, bundles);
}

#[test]
fn rewrites_are_byte_identical_and_leave_no_temp_files() {
    let dir = tempfile::tempdir().unwrap();
    let bundles: Vec<BlockBundle> = (0..6).map(|h| bundle(h, 2)).collect();
    write_archive(dir.path(), bundles.clone(), false).unwrap();
    let first = Sha256::digest(read_file_bytes(&dir.path().join("raw-0-9999.jsonl")).unwrap());
    write_archive(dir.path(), bundles, false).unwrap();
    let second = Sha256::digest(read_file_bytes(&dir.path().join("raw-0-9999.jsonl")).unwrap());
    assert_eq!(first, second);

    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|name| name.ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty(), "temp files left behind: {leftovers:?}");
}
