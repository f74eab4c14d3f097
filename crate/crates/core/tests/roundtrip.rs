//! Serialization round-trip properties: for every core type,
//! `parse(serialize(x)) == x`, and serialization is deterministic.

use proptest::prelude::*;

use xbeth_core::{
    Address, Amount256, Bytes, CallKind, CallTrace, CreateTrace, Hash32, LogEntry, RawBlock, RawTransaction,
    ReceiptRecord, RewardKind, RewardTrace, SuicideTrace, TraceAction, TraceRecord,
};

prop_compose! {
    fn arb_address()(raw in prop::array::uniform20(any::<u8>())) -> Address {
        Address(raw)
    }
}

prop_compose! {
    fn arb_hash()(raw in prop::array::uniform32(any::<u8>())) -> Hash32 {
        Hash32(raw)
    }
}

prop_compose! {
    fn arb_bytes()(raw in prop::collection::vec(any::<u8>(), 0..64)) -> Bytes {
        Bytes(raw)
    }
}

prop_compose! {
    fn arb_amount()(words in prop::array::uniform32(any::<u8>())) -> Amount256 {
        Amount256::from_be_word(&words)
    }
}

prop_compose! {
    fn arb_tx()(
        hash in arb_hash(),
        transaction_index in 0u32..500,
        from in arb_address(),
        to in prop::option::of(arb_address()),
        value in arb_amount(),
        gas in 21_000u64..10_000_000,
        gas_price in arb_amount(),
        input in arb_bytes(),
        nonce in any::<u64>(),
    ) -> RawTransaction {
        RawTransaction { hash, transaction_index, from, to, value, gas, gas_price, input, nonce }
    }
}

prop_compose! {
    fn arb_block()(
        number in any::<u64>(),
        hash in arb_hash(),
        parent_hash in arb_hash(),
        miner in arb_address(),
        timestamp in any::<u64>(),
        gas_limit in any::<u64>(),
        gas_used in any::<u64>(),
        size in any::<u64>(),
        extra_data in prop::collection::vec(any::<u8>(), 0..32),
        transactions in prop::collection::vec(arb_tx(), 0..4),
    ) -> RawBlock {
        RawBlock {
            number, hash, parent_hash, miner, timestamp, gas_limit, gas_used, size,
            extra_data: Bytes(extra_data), transactions,
        }
    }
}

fn arb_action() -> impl Strategy<Value = TraceAction> {
    prop_oneof![
        (arb_address(), arb_amount(), arb_bytes(), prop::option::of((arb_address(), arb_bytes())), any::<u64>()).prop_map(
            |(from, value, init_code, outcome, gas_used)| {
                let (result_address, deployed_code) = match outcome {
                    Some((a, c)) => (Some(a), Some(c)),
                    None => (None, None),
                };
                TraceAction::Create(CreateTrace { from, value, init_code, result_address, deployed_code, gas_used })
            }
        ),
        (
            prop::sample::select(CallKind::ALL.to_vec()),
            arb_address(),
            arb_address(),
            arb_amount(),
            arb_bytes(),
            any::<u64>(),
            arb_bytes()
        )
            .prop_map(|(call_type, from, to, value, input, gas_used, output)| {
                TraceAction::Call(CallTrace { call_type, from, to, value, input, gas_used, output })
            }),
        (arb_address(), arb_address(), arb_amount()).prop_map(|(address, refund_address, balance)| {
            TraceAction::Suicide(SuicideTrace { address, refund_address, balance })
        }),
        (arb_address(), arb_amount(), prop::sample::select(vec![RewardKind::Block, RewardKind::Uncle])).prop_map(
            |(author, value, reward_type)| TraceAction::Reward(RewardTrace { author, value, reward_type })
        ),
    ]
}

prop_compose! {
    fn arb_trace()(
        block_number in any::<u64>(),
        tx_hash in arb_hash(),
        trace_address in prop::collection::vec(0u32..8, 0..4),
        error in prop::option::of("[A-Za-z ]{1,20}"),
        action in arb_action(),
    ) -> TraceRecord {
        // reward traces carry no tx hash and sit at the top level
        let (tx_hash, trace_address) = if matches!(action, TraceAction::Reward(_)) {
            (None, Vec::new())
        } else {
            (Some(tx_hash), trace_address)
        };
        TraceRecord { block_number, tx_hash, trace_address, error, action }
    }
}

prop_compose! {
    fn arb_receipt()(
        transaction_hash in arb_hash(),
        block_number in any::<u64>(),
        gas_used in any::<u64>(),
        cumulative_gas_used in any::<u64>(),
        contract_address in prop::option::of(arb_address()),
        logs in prop::collection::vec(
            (arb_address(), prop::collection::vec(arb_hash(), 0..=4), arb_bytes(), any::<u32>())
                .prop_map(|(address, topics, data, log_index)| LogEntry { address, topics, data, log_index }),
            0..4
        ),
    ) -> ReceiptRecord {
        ReceiptRecord { transaction_hash, block_number, gas_used, cumulative_gas_used, contract_address, logs }
    }
}

proptest! {
    #[test]
    fn address_text_round_trip(a in arb_address()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Address>().unwrap(), a);
        prop_assert_eq!(text.to_uppercase().replace("0X", "0x").parse::<Address>().unwrap(), a);
    }

    #[test]
    fn amount_decimal_round_trip(v in arb_amount()) {
        prop_assert_eq!(v.to_string().parse::<Amount256>().unwrap(), v);
    }

    #[test]
    fn block_json_round_trip(b in arb_block()) {
        let json = serde_json::to_string(&b).unwrap();
        let back: RawBlock = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, b.clone());
        // canonical serialization is stable
        prop_assert_eq!(serde_json::to_string(&b).unwrap(), json);
    }

    #[test]
    fn trace_json_round_trip(t in arb_trace()) {
        let json = serde_json::to_string(&t).unwrap();
        let back: TraceRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn receipt_json_round_trip(r in arb_receipt()) {
        let json = serde_json::to_string(&r).unwrap();
        let back: ReceiptRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn amount_word_round_trip(v in arb_amount()) {
        prop_assert_eq!(Amount256::from_be_word(&v.to_be_word()), v);
    }
}
