//! The chain generator. Scenarios script whole transactions (traces,
//! receipts, logs) and the commit step applies their effects to the
//! ground-truth ledger: balances move only for value-bearing frames whose
//! whole ancestor chain is error-free, fees always flow to the block's
//! miner, and every scripted token transfer is paired with exactly one
//! receipt log.
//!
//! Generated contracts carry no executable code: deployed bytecode is
//! synthetic bytes of known length and behavior is scripted, because the
//! pipeline under test only decodes records, it never runs them.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;

use xbeth_core::decimal::{biguint_wei_to_ether_exact, div_decimal_half_even, div_u128_half_even, wei_to_ether_2dp};
use xbeth_core::{
    Address, Amount256, Bytes, CallKind, CallTrace, CreateTrace, Hash32, LogEntry, RawBlock, RawTransaction,
    ReceiptRecord, RewardKind, RewardTrace, SuicideTrace, TraceAction, TraceRecord,
};
use xbeth_datasets::{
    BlockRow, ContractCallRow, ContractInfoRow, Erc20TransferRow, Erc721TransferRow, InternalEtherTxRow,
    InternalKind, TokenMetadataRow, TxRow,
};
use xbeth_ingest::BlockBundle;
use xbeth_stats::{
    code_size_bucket, code_size_bucket_label, ether_bucket, ether_bucket_label, ether_bucket_order, interval_start,
    SelectorCount, StatsReport, Table1, Table2, Table3, Table4, Table5, Table6, KNOWN_ERROR_LABELS,
};

use crate::ledger::{ExpectedRowCounts, ExpectedRows, FixtureLedger, TokenInfo};
use crate::rng::{derive_address, derive_hash, tags, CounterRng};
use crate::spec::{FixtureSpec, Scenario, SCENARIOS};
use crate::FixtureError;

/// Frozen protocol constants; the decoding side derives these from the
/// hash, the generator pins them as literals so the two routes stay
/// independent.
const TRANSFER_TOPIC_HEX: &str = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef";
const APPROVAL_TOPIC_HEX: &str = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925";

const BLOCK_REWARD_WEI: u128 = 2_000_000_000_000_000_000;
const UNCLE_REWARD_WEI: u128 = 1_750_000_000_000_000_000;
const GENESIS_TIMESTAMP: u64 = 1_438_269_988;

const USER_COUNT: u64 = 24;
const USER_FUNDS_WEI: u128 = 1_000_000_000_000_000_000_000_000; // 10^24
const WHALE_FUNDS_WEI_POW10: u32 = 27; // 2 * 10^27

const NAME_WORDS: [&str; 12] =
    ["Chain", "Coin", "Share", "Test", "Gold", "Super", "Moon", "Star", "Pay", "Bit", "Net", "Token"];

/// (wire label, normalized report key) pairs; weights alongside.
const ERROR_POOL: [(&str, &str, u64); 6] = [
    ("Out of gas", "out_of_gas", 30),
    ("out of gas", "out_of_gas", 10),
    ("Reverted", "reverted", 25),
    ("Bad instruction", "bad_instruction", 10),
    ("Bad jump destination", "bad_jump_destination", 10),
    ("Stack underflow", "other:stack underflow", 15),
];

/// Selector pool for scripted call inputs; the first is the canonical
/// token transfer entry.
const CALL_SELECTORS: [[u8; 4]; 6] = [
    [0xa9, 0x05, 0x9c, 0xbb], // transfer(address,uint256)
    [0x70, 0xa0, 0x82, 0x31], // balanceOf(address)
    [0x23, 0xb8, 0x72, 0xdd], // transferFrom(address,address,uint256)
    [0x09, 0x5e, 0xa7, 0xb3], // approve(address,uint256)
    [0x40, 0xc1, 0x0f, 0x19], // mint(address,uint256)
    [0x42, 0x96, 0x6c, 0x68], // burn(uint256)
];

struct Miner {
    address: Address,
    extra: Vec<u8>,
    words: &'static [&'static str],
}

fn miner_pool(seed: u64) -> Vec<Miner> {
    const TAGS: [(&[u8], &[&str]); 5] = [
        (b"nanopool", &["nanopool"]),
        (b"ethermine-eu1", &["ethermine", "eu1"]),
        (b"f2pool.com", &["f2pool", "com"]),
        (b"", &[]),
        (&[0x00, 0xff, 0xfe, 0x00, 0x80], &[]),
    ];
    TAGS.iter()
        .enumerate()
        .map(|(i, (extra, words))| Miner {
            address: derive_address(tags::MINER, seed, i as u64),
            extra: extra.to_vec(),
            words,
        })
        .collect()
}

struct TokenState {
    address: Address,
    nonstandard: bool,
    info: TokenInfo,
}

struct NftState {
    address: Address,
    next_id: u64,
    owners: Vec<(u64, Address)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IntentStandard {
    Erc20,
    Erc20NonStandard,
    Erc721,
}

struct TransferIntent {
    standard: IntentStandard,
    token: Address,
    from: Address,
    to: Address,
    value_or_id: Amount256,
}

struct TraceNode {
    trace_address: Vec<u32>,
    error: Option<String>,
    action: TraceAction,
}

struct ScriptedTx {
    sender: Address,
    to: Option<Address>,
    value: Amount256,
    input: Bytes,
    traces: Vec<TraceNode>,
    /// Receipt logs paired with the scripted token transfer they encode
    /// (noise logs carry no intent).
    logs: Vec<(LogEntry, Option<TransferIntent>)>,
    created_contract: Option<Address>,
}

pub struct GeneratedFixture {
    pub bundles: Vec<BlockBundle>,
    pub ledger: FixtureLedger,
}

pub fn generate(spec: &FixtureSpec) -> Result<GeneratedFixture, FixtureError> {
    spec.validate()?;
    Ok(Gen::new(spec).run())
}

struct Gen<'a> {
    spec: &'a FixtureSpec,
    rng: CounterRng,
    transfer_topic: Hash32,
    approval_topic: Hash32,

    users: Vec<Address>,
    whale: Address,
    miners: Vec<Miner>,
    balances: BTreeMap<Address, Amount256>,
    genesis: BTreeMap<Address, Amount256>,
    nonces: HashMap<Address, u64>,

    plain_contracts: Vec<Address>,
    tokens: Vec<TokenState>,
    nfts: Vec<NftState>,
    next_contract: u64,
    next_fresh_refund: u64,

    bundles: Vec<BlockBundle>,
    rows_blocks: Vec<BlockRow>,
    rows_txs: Vec<TxRow>,
    rows_internal: Vec<InternalEtherTxRow>,
    rows_contracts: Vec<ContractInfoRow>,
    open_contracts: HashMap<Address, usize>,
    rows_calls: Vec<ContractCallRow>,
    rows_erc20: Vec<Erc20TransferRow>,
    rows_erc721: Vec<Erc721TransferRow>,

    miner_word_counts: HashMap<String, u64>,
    reward_total: BigUint,
}

impl<'a> Gen<'a> {
    fn new(spec: &'a FixtureSpec) -> Gen<'a> {
        let users: Vec<Address> = (0..USER_COUNT).map(|i| derive_address(tags::USER, spec.seed, i)).collect();
        let whale = derive_address(tags::WHALE, spec.seed, 0);
        let mut balances = BTreeMap::new();
        for user in &users {
            balances.insert(*user, Amount256::from(USER_FUNDS_WEI));
        }
        let whale_funds = Amount256::from(2u64)
            .checked_mul(&ten_pow(WHALE_FUNDS_WEI_POW10))
            .expect("whale allocation in range");
        balances.insert(whale, whale_funds);
        Gen {
            spec,
            rng: CounterRng::new(spec.seed),
            transfer_topic: TRANSFER_TOPIC_HEX.parse().expect("frozen topic constant"),
            approval_topic: APPROVAL_TOPIC_HEX.parse().expect("frozen topic constant"),
            users,
            whale,
            miners: miner_pool(spec.seed),
            genesis: balances.clone(),
            balances,
            nonces: HashMap::new(),
            plain_contracts: Vec::new(),
            tokens: Vec::new(),
            nfts: Vec::new(),
            next_contract: 0,
            next_fresh_refund: 0,
            bundles: Vec::new(),
            rows_blocks: Vec::new(),
            rows_txs: Vec::new(),
            rows_internal: Vec::new(),
            rows_contracts: Vec::new(),
            open_contracts: HashMap::new(),
            rows_calls: Vec::new(),
            rows_erc20: Vec::new(),
            rows_erc721: Vec::new(),
            miner_word_counts: HashMap::new(),
            reward_total: BigUint::from(0u8),
        }
    }

    // ---- balance ledger -------------------------------------------------

    fn balance(&self, who: &Address) -> Amount256 {
        self.balances.get(who).cloned().unwrap_or_else(Amount256::zero)
    }

    fn credit(&mut self, who: Address, value: &Amount256) {
        if value.is_zero() {
            return;
        }
        let updated = self.balance(&who).checked_add(value).expect("fixture balances stay in range");
        self.balances.insert(who, updated);
    }

    fn debit(&mut self, who: Address, value: &Amount256) {
        if value.is_zero() {
            return;
        }
        let updated = self
            .balance(&who)
            .checked_sub(value)
            .unwrap_or_else(|_| panic!("fixture scripting bug: {who} overdrawn"));
        self.balances.insert(who, updated);
    }

    fn move_value(&mut self, from: Address, to: Address, value: &Amount256) {
        if value.is_zero() {
            return;
        }
        self.debit(from, value);
        self.credit(to, value);
    }

    // ---- scripting helpers ----------------------------------------------

    fn pick_user(&mut self) -> Address {
        *self.rng.pick(&self.users.clone())
    }

    /// First user (rotating from a random offset) able to pay `need`.
    fn pick_funded(&mut self, need: &Amount256) -> Option<Address> {
        let start = self.rng.below(self.users.len() as u64) as usize;
        for i in 0..self.users.len() {
            let user = self.users[(start + i) % self.users.len()];
            if self.balance(&user) >= *need {
                return Some(user);
            }
        }
        None
    }

    fn draw_error(&mut self) -> String {
        let total: u64 = ERROR_POOL.iter().map(|(_, _, w)| w).sum();
        let mut target = self.rng.below(total);
        for (label, _, weight) in ERROR_POOL {
            if target < weight {
                return label.to_string();
            }
            target -= weight;
        }
        unreachable!()
    }

    /// Wei value inside the Ether decade `[10^d, 10^(d+1))`: a 4-digit
    /// mantissa times 10^(d+15) lands in `[10^(d+18), 10^(d+19))` wei.
    fn decade_value(&mut self, decade: i32) -> Amount256 {
        let mantissa = self.rng.range(1_000, 9_999);
        Amount256::from(mantissa)
            .checked_mul(&ten_pow((decade + 15) as u32))
            .expect("decade value in range")
    }

    fn word_value(&mut self) -> Amount256 {
        let mut word = [0u8; 32];
        self.rng.fill_bytes(&mut word);
        Amount256::from_be_word(&word)
    }

    fn topic_for(address: &Address) -> Hash32 {
        let mut word = [0u8; 32];
        word[12..].copy_from_slice(address.as_bytes());
        Hash32(word)
    }

    fn id_word(id: &Amount256) -> Hash32 {
        Hash32(id.to_be_word())
    }

    fn selector_input(&mut self, selector: [u8; 4], words: usize) -> Bytes {
        let mut input = selector.to_vec();
        input.extend(self.rng.bytes(32 * words));
        Bytes(input)
    }

    fn erc20_log(
        &mut self,
        token: Address,
        nonstandard: bool,
        from: Address,
        to: Address,
        value: &Amount256,
    ) -> (LogEntry, Option<TransferIntent>) {
        let log = if nonstandard {
            let mut data = Vec::with_capacity(96);
            data.extend_from_slice(&Self::topic_for(&from).0);
            data.extend_from_slice(&Self::topic_for(&to).0);
            data.extend_from_slice(&value.to_be_word());
            LogEntry { address: token, topics: vec![self.transfer_topic], data: Bytes(data), log_index: 0 }
        } else {
            LogEntry {
                address: token,
                topics: vec![self.transfer_topic, Self::topic_for(&from), Self::topic_for(&to)],
                data: Bytes(value.to_be_word().to_vec()),
                log_index: 0,
            }
        };
        let standard = if nonstandard { IntentStandard::Erc20NonStandard } else { IntentStandard::Erc20 };
        let intent = TransferIntent { standard, token, from, to, value_or_id: value.clone() };
        (log, Some(intent))
    }

    fn erc721_log(&mut self, token: Address, from: Address, to: Address, id: &Amount256) -> (LogEntry, Option<TransferIntent>) {
        let log = LogEntry {
            address: token,
            topics: vec![self.transfer_topic, Self::topic_for(&from), Self::topic_for(&to), Self::id_word(id)],
            data: Bytes::new(),
            log_index: 0,
        };
        let intent =
            TransferIntent { standard: IntentStandard::Erc721, token, from, to, value_or_id: id.clone() };
        (log, Some(intent))
    }

    /// Noise logs the pipeline must skip or ignore without producing rows.
    fn noise_log(&mut self, emitter: Address) -> (LogEntry, Option<TransferIntent>) {
        match self.rng.below(3) {
            0 => {
                // Approval event: valid, but not a transfer at all
                let log = LogEntry {
                    address: emitter,
                    topics: vec![
                        self.approval_topic,
                        Self::topic_for(&self.pick_user()),
                        Self::topic_for(&emitter),
                    ],
                    data: Bytes(self.rng.bytes(32)),
                    log_index: 0,
                };
                (log, None)
            }
            1 => {
                // Transfer topic with an off-shape body: 2 topics, 32 bytes
                let log = LogEntry {
                    address: emitter,
                    topics: vec![self.transfer_topic, Self::topic_for(&self.pick_user())],
                    data: Bytes(self.rng.bytes(32)),
                    log_index: 0,
                };
                (log, None)
            }
            _ => {
                // Transfer shape with dirty high bytes in an address word
                let mut dirty = [0u8; 32];
                self.rng.fill_bytes(&mut dirty);
                dirty[0] |= 0x01;
                let log = LogEntry {
                    address: emitter,
                    topics: vec![self.transfer_topic, Hash32(dirty), Self::topic_for(&self.pick_user())],
                    data: Bytes(self.rng.bytes(32)),
                    log_index: 0,
                };
                (log, None)
            }
        }
    }

    fn new_contract_address(&mut self) -> Address {
        let address = derive_address(tags::CONTRACT, self.spec.seed, self.next_contract);
        self.next_contract += 1;
        address
    }

    // ---- scenarios -------------------------------------------------------

    fn script_plain(&mut self, gas_price: &Amount256) -> Option<ScriptedTx> {
        let gas_used = 21_000u64;
        let fee = Amount256::from(gas_used).checked_mul(gas_price).ok()?;

        let (sender, value) = if self.rng.chance(1) {
            // whale-scale transfer exercising the histogram overflow bucket
            let value = self.decade_value(8);
            let need = value.checked_add(&fee).ok()?;
            if self.balance(&self.whale) < need {
                return None;
            }
            (self.whale, value)
        } else {
            let decade = self.rng.range(0, 11) as i32 - 7; // [-7, 4]
            let value = self.decade_value(decade);
            let need = value.checked_add(&fee).ok()?;
            (self.pick_funded(&need)?, value)
        };

        let recipient = if self.rng.chance(2) { sender } else { self.pick_user() };
        let error = self.rng.chance(3).then(|| self.draw_error());
        let root = TraceNode {
            trace_address: vec![],
            error,
            action: TraceAction::Call(CallTrace {
                call_type: CallKind::Call,
                from: sender,
                to: recipient,
                value: value.clone(),
                input: Bytes::new(),
                gas_used: 0,
                output: Bytes::new(),
            }),
        };
        Some(ScriptedTx {
            sender,
            to: Some(recipient),
            value,
            input: Bytes::new(),
            traces: vec![root],
            logs: vec![],
            created_contract: None,
        })
    }

    fn script_deploy(&mut self, gas_price: &Amount256) -> Option<ScriptedTx> {
        let init_len = self.rng.range(60, 300) as usize;
        let cluster = *self.rng.pick(&[200u64, 958, 2048, 3500]);
        let code_len = self.rng.range(cluster - cluster / 10, cluster + cluster / 10);
        let work_gas = 32_000 + code_len * 120;
        let fee = Amount256::from(21_000 + work_gas).checked_mul(gas_price).ok()?;
        let sender = self.pick_funded(&fee)?;

        let failed = self.rng.chance(5);
        let contract = (!failed).then(|| self.new_contract_address());
        let init_code = Bytes(self.rng.bytes(init_len));
        let deployed_code = (!failed).then(|| Bytes(self.rng.bytes(code_len as usize)));
        let error = failed.then(|| self.draw_error());

        let root = TraceNode {
            trace_address: vec![],
            error,
            action: TraceAction::Create(CreateTrace {
                from: sender,
                value: Amount256::zero(),
                init_code: init_code.clone(),
                result_address: contract,
                deployed_code,
                gas_used: work_gas,
            }),
        };
        Some(ScriptedTx {
            sender,
            to: None,
            value: Amount256::zero(),
            input: init_code,
            traces: vec![root],
            logs: vec![],
            created_contract: contract,
        })
    }

    fn script_call_tree(&mut self, gas_price: &Amount256, error_pct: u64) -> Option<ScriptedTx> {
        let target = match self.plain_contracts.is_empty() {
            true => return self.script_deploy(gas_price),
            false => *self.rng.pick(&self.plain_contracts.clone()),
        };

        let deposit = if self.rng.chance(50) {
            let decade = self.rng.range(0, 4) as i32 - 3; // [-3, 0]
            self.decade_value(decade)
        } else {
            Amount256::zero()
        };
        // generous gas bound: root plus up to 3 children and 2 grandchildren
        let fee_bound = Amount256::from(21_000 + 6 * 90_000u64).checked_mul(gas_price).ok()?;
        let need = deposit.checked_add(&fee_bound).ok()?;
        let sender = self.pick_funded(&need)?;

        let selector = *self.rng.pick(&CALL_SELECTORS);
        let words = self.rng.below(4) as usize;
        let input = self.selector_input(selector, words);
        let mut traces = vec![TraceNode {
            trace_address: vec![],
            error: self.rng.chance(error_pct).then(|| self.draw_error()),
            action: TraceAction::Call(CallTrace {
                call_type: CallKind::Call,
                from: sender,
                to: target,
                value: deposit.clone(),
                input: input.clone(),
                gas_used: self.rng.range(2_000, 60_000),
                output: {
                    let len = if self.rng.chance(50) { 32 } else { 0 };
                    Bytes(self.rng.bytes(len))
                },
            }),
        }];

        // effective balance of the called contract while the tree runs
        let root_effective = traces[0].error.is_none();
        let mut contract_funds = if root_effective {
            self.balance(&target).checked_add(&deposit).expect("in range")
        } else {
            self.balance(&target)
        };

        let child_count = self.rng.below(4) as u32;
        for child in 0..child_count {
            let call_type = match self.rng.below(100) {
                0..=59 => CallKind::Call,
                60..=79 => CallKind::DelegateCall,
                80..=94 => CallKind::StaticCall,
                _ => CallKind::CallCode,
            };
            let to_contract = !self.plain_contracts.is_empty() && self.rng.chance(60);
            let to = if to_contract { *self.rng.pick(&self.plain_contracts.clone()) } else { self.pick_user() };
            let error = self.rng.chance(error_pct).then(|| self.draw_error());

            let value = if call_type == CallKind::Call && self.rng.chance(40) && !contract_funds.is_zero() {
                // spend at most half of what the contract effectively holds
                let cap = contract_funds.to_u128().unwrap_or(u128::MAX) / 2;
                if cap == 0 {
                    Amount256::zero()
                } else {
                    Amount256::from(self.rng.range(1, cap.min(u64::MAX as u128) as u64))
                }
            } else {
                Amount256::zero()
            };
            if root_effective && error.is_none() && !value.is_zero() {
                contract_funds = contract_funds.checked_sub(&value).expect("capped above");
            }

            traces.push(TraceNode {
                trace_address: vec![child],
                error,
                action: TraceAction::Call(CallTrace {
                    call_type,
                    from: target,
                    to,
                    value,
                    input: if self.rng.chance(70) {
                        let sel = *self.rng.pick(&CALL_SELECTORS);
                        let w = self.rng.below(3) as usize;
                        self.selector_input(sel, w)
                    } else {
                        let len = self.rng.below(4) as usize;
                        Bytes(self.rng.bytes(len))
                    },
                    gas_used: self.rng.range(2_000, 40_000),
                    output: Bytes::new(),
                }),
            });

            // occasional grandchild, value-free for simplicity
            if self.rng.chance(30) {
                traces.push(TraceNode {
                    trace_address: vec![child, 0],
                    error: self.rng.chance(error_pct).then(|| self.draw_error()),
                    action: TraceAction::Call(CallTrace {
                        call_type: CallKind::StaticCall,
                        from: to,
                        to: self.pick_user(),
                        value: Amount256::zero(),
                        input: Bytes(self.rng.bytes(4)),
                        gas_used: self.rng.range(1_000, 10_000),
                        output: Bytes::new(),
                    }),
                });
            }
        }

        Some(ScriptedTx {
            sender,
            to: Some(target),
            value: deposit,
            input,
            traces,
            logs: vec![],
            created_contract: None,
        })
    }

    fn script_erc20(&mut self, gas_price: &Amount256) -> Option<ScriptedTx> {
        if self.tokens.is_empty() || self.rng.chance(8) {
            return self.script_token_deploy(gas_price, false);
        }
        let token_index = self.rng.below(self.tokens.len() as u64) as usize;
        let token_address = self.tokens[token_index].address;

        let work_gas = self.rng.range(20_000, 60_000);
        let fee = Amount256::from(21_000 + work_gas).checked_mul(gas_price).ok()?;
        let sender = self.pick_funded(&fee)?;

        let errored = self.rng.chance(4);
        let error = errored.then(|| self.draw_error());
        let input = self.selector_input(CALL_SELECTORS[0], 2);

        let mut logs = Vec::new();
        if !errored {
            let from = if self.rng.chance(90) { sender } else { self.pick_user() };
            let to = if self.rng.chance(5) { Address::ZERO } else { self.pick_user() };
            let value = if self.rng.chance(2) {
                self.word_value()
            } else {
                Amount256::from(self.rng.next_u64()).checked_mul(&ten_pow(6)).expect("in range")
            };
            let nonstandard = self.tokens[token_index].nonstandard;
            logs.push(self.erc20_log(token_address, nonstandard, from, to, &value));
            if self.rng.chance(12) {
                let noise = self.noise_log(token_address);
                logs.push(noise);
            }
        }

        let root = TraceNode {
            trace_address: vec![],
            error,
            action: TraceAction::Call(CallTrace {
                call_type: CallKind::Call,
                from: sender,
                to: token_address,
                value: Amount256::zero(),
                input: input.clone(),
                gas_used: work_gas,
                output: Bytes::new(),
            }),
        };
        Some(ScriptedTx {
            sender,
            to: Some(token_address),
            value: Amount256::zero(),
            input,
            traces: vec![root],
            logs,
            created_contract: None,
        })
    }

    /// Deploys a token contract; ERC721 deployments register an NFT state
    /// instead of a fungible token.
    fn script_token_deploy(&mut self, gas_price: &Amount256, erc721: bool) -> Option<ScriptedTx> {
        let code_len = self.rng.range(900, 4_000);
        let work_gas = 53_000 + code_len * 60;
        let fee = Amount256::from(21_000 + work_gas).checked_mul(gas_price).ok()?;
        let sender = self.pick_funded(&fee)?;
        let contract = self.new_contract_address();

        let init_len = self.rng.range(120, 400) as usize;
        let init_code = Bytes(self.rng.bytes(init_len));
        let deployed_code = Bytes(self.rng.bytes(code_len as usize));

        let mut logs = Vec::new();
        if erc721 {
            self.nfts.push(NftState { address: contract, next_id: 1, owners: Vec::new() });
            let owner = self.pick_user();
            let id = Amount256::from(self.nft_mint_id(contract));
            let entry = self.erc721_log(contract, Address::ZERO, owner, &id);
            logs.push(entry);
            self.nft_record_owner(contract, &id, owner);
        } else {
            let one_word = self.rng.chance(40);
            let mut name_words = vec![*self.rng.pick(&NAME_WORDS)];
            if !one_word {
                let second = *self.rng.pick(&NAME_WORDS);
                name_words.push(second);
            }
            let name = (!self.rng.chance(10)).then(|| name_words.join(" "));
            let symbol = (!self.rng.chance(10)).then(|| {
                (0..self.rng.range(3, 4)).map(|_| (b'A' + self.rng.below(26) as u8) as char).collect::<String>()
            });
            let decimals = (!self.rng.chance(15)).then(|| *self.rng.pick(&[18u32, 8, 6]));
            let total_supply = (!self.rng.chance(5))
                .then(|| Amount256::from(self.rng.range(1_000, 9_000_000)).checked_mul(&ten_pow(16)).expect("in range"));
            let nonstandard = self.rng.chance(20);

            let mint_value = total_supply
                .clone()
                .unwrap_or_else(|| Amount256::from(self.rng.next_u64()));
            let issuer = sender;
            logs.push(self.erc20_log(contract, nonstandard, Address::ZERO, issuer, &mint_value));
            self.tokens.push(TokenState {
                address: contract,
                nonstandard,
                info: TokenInfo { name, symbol, decimals, total_supply },
            });
        }

        let root = TraceNode {
            trace_address: vec![],
            error: None,
            action: TraceAction::Create(CreateTrace {
                from: sender,
                value: Amount256::zero(),
                init_code: init_code.clone(),
                result_address: Some(contract),
                deployed_code: Some(deployed_code),
                gas_used: work_gas,
            }),
        };
        Some(ScriptedTx {
            sender,
            to: None,
            value: Amount256::zero(),
            input: init_code,
            traces: vec![root],
            logs,
            created_contract: Some(contract),
        })
    }

    fn nft_mint_id(&mut self, contract: Address) -> u64 {
        let nft = self.nfts.iter_mut().find(|n| n.address == contract).expect("nft registered");
        let id = nft.next_id;
        nft.next_id += 1;
        id
    }

    fn nft_record_owner(&mut self, contract: Address, id: &Amount256, owner: Address) {
        let nft = self.nfts.iter_mut().find(|n| n.address == contract).expect("nft registered");
        let raw = id.to_u128().expect("fixture ids fit") as u64;
        match nft.owners.iter_mut().find(|(i, _)| *i == raw) {
            Some(entry) => entry.1 = owner,
            None => nft.owners.push((raw, owner)),
        }
    }

    fn script_erc721(&mut self, gas_price: &Amount256) -> Option<ScriptedTx> {
        if self.nfts.is_empty() || self.rng.chance(6) {
            return self.script_token_deploy(gas_price, true);
        }
        let nft_index = self.rng.below(self.nfts.len() as u64) as usize;
        let contract = self.nfts[nft_index].address;

        let work_gas = self.rng.range(25_000, 80_000);
        let fee = Amount256::from(21_000 + work_gas).checked_mul(gas_price).ok()?;
        let sender = self.pick_funded(&fee)?;

        let mint = self.nfts[nft_index].owners.is_empty() || self.rng.chance(40);
        let (log, selector) = if mint {
            let owner = self.pick_user();
            let id = Amount256::from(self.nft_mint_id(contract));
            self.nft_record_owner(contract, &id, owner);
            (self.erc721_log(contract, Address::ZERO, owner, &id), CALL_SELECTORS[4])
        } else {
            let owners = &self.nfts[nft_index].owners;
            let (id_raw, old_owner) = *self.rng.pick(owners);
            let new_owner = self.pick_user();
            let id = Amount256::from(id_raw);
            self.nft_record_owner(contract, &id, new_owner);
            (self.erc721_log(contract, old_owner, new_owner, &id), CALL_SELECTORS[2])
        };

        let input = self.selector_input(selector, 3);
        let root = TraceNode {
            trace_address: vec![],
            error: None,
            action: TraceAction::Call(CallTrace {
                call_type: CallKind::Call,
                from: sender,
                to: contract,
                value: Amount256::zero(),
                input: input.clone(),
                gas_used: work_gas,
                output: Bytes::new(),
            }),
        };
        Some(ScriptedTx {
            sender,
            to: Some(contract),
            value: Amount256::zero(),
            input,
            traces: vec![root],
            logs: vec![log],
            created_contract: None,
        })
    }

    fn script_storm(&mut self, gas_price: &Amount256) -> Option<ScriptedTx> {
        if self.plain_contracts.is_empty() {
            return self.script_deploy(gas_price);
        }
        let victim_count = self.rng.range(1, 4.min(self.plain_contracts.len() as u64));
        let mut victims = Vec::new();
        for _ in 0..victim_count {
            let index = self.rng.below(self.plain_contracts.len() as u64) as usize;
            let victim = self.plain_contracts[index];
            if !victims.contains(&victim) {
                victims.push(victim);
            }
        }

        let work_gas = 5_000 + 10_000 * victims.len() as u64;
        let fee = Amount256::from(21_000 + work_gas).checked_mul(gas_price).ok()?;
        let sender = self.pick_funded(&fee)?;
        let factory = victims[0];

        let root_error = self.rng.chance(5).then(|| self.draw_error());
        let mut traces = vec![TraceNode {
            trace_address: vec![],
            error: root_error,
            action: TraceAction::Call(CallTrace {
                call_type: CallKind::Call,
                from: sender,
                to: factory,
                value: Amount256::zero(),
                input: self.selector_input(CALL_SELECTORS[5], 1),
                gas_used: work_gas,
                output: Bytes::new(),
            }),
        }];

        for (i, victim) in victims.iter().enumerate() {
            let refund = match self.rng.below(100) {
                0..=39 => {
                    let fresh = derive_address(tags::FRESH_REFUND, self.spec.seed, self.next_fresh_refund);
                    self.next_fresh_refund += 1;
                    fresh
                }
                40..=59 => Address::ZERO,
                _ => self.pick_user(),
            };
            traces.push(TraceNode {
                trace_address: vec![i as u32],
                error: None,
                action: TraceAction::Suicide(SuicideTrace {
                    address: *victim,
                    refund_address: refund,
                    balance: self.balance(victim),
                }),
            });
        }

        let input = traces[0].action.as_call().unwrap().input.clone();
        Some(ScriptedTx {
            sender,
            to: Some(factory),
            value: Amount256::zero(),
            input,
            traces,
            logs: vec![],
            created_contract: None,
        })
    }

    // ---- commit ----------------------------------------------------------

    /// Direct-children gas roll-up so parent frames include their subtree.
    fn rollup_gas(traces: &mut [TraceNode]) {
        for i in (0..traces.len()).rev() {
            let parent_addr = traces[i].trace_address.clone();
            let mut subtree = 0u64;
            for child in traces.iter().skip(i + 1) {
                if child.trace_address.len() == parent_addr.len() + 1 && child.trace_address.starts_with(&parent_addr)
                {
                    subtree += match &child.action {
                        TraceAction::Call(c) => c.gas_used,
                        TraceAction::Create(c) => c.gas_used,
                        _ => 0,
                    };
                }
            }
            match &mut traces[i].action {
                TraceAction::Call(c) => c.gas_used += subtree,
                TraceAction::Create(c) => c.gas_used += subtree,
                _ => {}
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn commit_tx(
        &mut self,
        block_number: u64,
        tx_index: u32,
        miner: Address,
        gas_price: &Amount256,
        mut scripted: ScriptedTx,
        raw_txs: &mut Vec<RawTransaction>,
        receipts: &mut Vec<ReceiptRecord>,
        all_traces: &mut Vec<TraceRecord>,
        cumulative_gas: &mut u64,
        next_log_index: &mut u32,
    ) {
        Self::rollup_gas(&mut scripted.traces);
        let root_gas = match &scripted.traces[0].action {
            TraceAction::Call(c) => c.gas_used,
            TraceAction::Create(c) => c.gas_used,
            _ => 0,
        };
        let gas_used = 21_000 + root_gas;
        let fee = Amount256::from(gas_used).checked_mul(gas_price).expect("fee in range");

        let need = scripted.value.checked_add(&fee).expect("in range");
        assert!(
            self.balance(&scripted.sender) >= need,
            "fixture scripting bug: sender cannot cover value+fee at block {block_number}"
        );

        let tx_hash = derive_hash(tags::TX_HASH, self.spec.seed, block_number, tx_index as u64);
        let nonce_ref = self.nonces.entry(scripted.sender).or_insert(0);
        let nonce = *nonce_ref;
        *nonce_ref += 1;

        // fee first, then effective value movements in frame order
        self.debit(scripted.sender, &fee);
        self.credit(miner, &fee);

        let errored: HashSet<Vec<u32>> = scripted
            .traces
            .iter()
            .filter(|t| t.error.is_some())
            .map(|t| t.trace_address.clone())
            .collect();
        let blocked =
            |addr: &[u32]| (0..=addr.len()).any(|k| errored.contains(&addr[..k].to_vec()));

        let root_error = scripted.traces[0].error.clone();
        let create_effective = scripted.created_contract.is_some() && root_error.is_none();

        for node in &scripted.traces {
            let effective = !blocked(&node.trace_address);
            match &node.action {
                TraceAction::Call(call) => {
                    if effective && !call.value.is_zero() {
                        self.move_value(call.from, call.to, &call.value);
                        self.rows_internal.push(InternalEtherTxRow {
                            block_number,
                            tx_hash,
                            trace_address: node.trace_address.clone(),
                            kind: InternalKind::CallValue,
                            from: call.from,
                            to: call.to,
                            value_wei: call.value.clone(),
                        });
                    }
                    // the fixture derives the selector itself: the first
                    // four input bytes, present only when there are four
                    let selector = call
                        .input
                        .as_slice()
                        .get(..4)
                        .map(|s| xbeth_decode::Selector([s[0], s[1], s[2], s[3]]));
                    self.rows_calls.push(ContractCallRow {
                        block_number,
                        tx_hash,
                        trace_address: node.trace_address.clone(),
                        call_type: call.call_type,
                        from: call.from,
                        to: call.to,
                        selector,
                        input_size: call.input.len() as u64,
                        value_wei: call.value.clone(),
                        gas_used: call.gas_used,
                        error: node.error.clone(),
                    });
                }
                TraceAction::Create(create) => {
                    assert!(create.value.is_zero(), "fixture creates carry no endowment");
                    if effective && create.result_address.is_some() {
                        let address = create.result_address.unwrap();
                        let deployed = create.deployed_code.clone().unwrap_or_default();
                        self.rows_contracts.push(ContractInfoRow {
                            contract_address: address,
                            creator: Some(create.from),
                            creation_block: Some(block_number),
                            creation_tx_hash: Some(tx_hash),
                            initial_value: Some(Amount256::zero()),
                            creation_code: Some(create.init_code.clone()),
                            deployed_code: Some(deployed.clone()),
                            deployed_code_size_bytes: Some(deployed.len() as u64),
                            deleted: false,
                            deletion_block: None,
                            refund_address: None,
                            refund_value: None,
                            unseen_creation: false,
                        });
                        self.open_contracts.insert(address, self.rows_contracts.len() - 1);
                        // token/NFT contracts are registered by their scenarios
                        if !self.tokens.iter().any(|t| t.address == address)
                            && !self.nfts.iter().any(|n| n.address == address)
                        {
                            self.plain_contracts.push(address);
                        }
                    }
                }
                TraceAction::Suicide(suicide) => {
                    if effective {
                        if !suicide.balance.is_zero() {
                            self.move_value(suicide.address, suicide.refund_address, &suicide.balance);
                            self.rows_internal.push(InternalEtherTxRow {
                                block_number,
                                tx_hash,
                                trace_address: node.trace_address.clone(),
                                kind: InternalKind::SuicideRefund,
                                from: suicide.address,
                                to: suicide.refund_address,
                                value_wei: suicide.balance.clone(),
                            });
                        }
                        if let Some(row) = self.open_contracts.remove(&suicide.address) {
                            let row = &mut self.rows_contracts[row];
                            row.deleted = true;
                            row.deletion_block = Some(block_number);
                            row.refund_address = Some(suicide.refund_address);
                            row.refund_value = Some(suicide.balance.clone());
                        }
                        self.plain_contracts.retain(|c| *c != suicide.address);
                    }
                }
                TraceAction::Reward(_) => unreachable!("rewards are block-level"),
            }
        }

        // expected transaction row
        self.rows_txs.push(TxRow {
            tx_hash,
            block_number,
            tx_index,
            from: scripted.sender,
            to: scripted.to,
            value: scripted.value.clone(),
            gas_price: gas_price.clone(),
            gas_used,
            miner_reward: fee,
            input_size: scripted.input.len() as u64,
            error: root_error.clone(),
        });

        // receipt logs with block-scoped indices, plus expected token rows
        let mut logs = Vec::new();
        for (mut log, intent) in scripted.logs {
            log.log_index = *next_log_index;
            *next_log_index += 1;
            if let Some(intent) = intent {
                match intent.standard {
                    IntentStandard::Erc20 | IntentStandard::Erc20NonStandard => {
                        self.rows_erc20.push(Erc20TransferRow {
                            token: intent.token,
                            from: intent.from,
                            to: intent.to,
                            value: intent.value_or_id,
                            block_number,
                            tx_hash,
                            log_index: log.log_index,
                        });
                    }
                    IntentStandard::Erc721 => {
                        self.rows_erc721.push(Erc721TransferRow {
                            token: intent.token,
                            from: intent.from,
                            to: intent.to,
                            token_id: intent.value_or_id,
                            block_number,
                            tx_hash,
                            log_index: log.log_index,
                        });
                    }
                }
            }
            logs.push(log);
        }

        *cumulative_gas += gas_used;
        receipts.push(ReceiptRecord {
            transaction_hash: tx_hash,
            block_number,
            gas_used,
            cumulative_gas_used: *cumulative_gas,
            contract_address: create_effective.then(|| scripted.created_contract.unwrap()),
            logs,
        });
        raw_txs.push(RawTransaction {
            hash: tx_hash,
            transaction_index: tx_index,
            from: scripted.sender,
            to: scripted.to,
            value: scripted.value,
            gas: gas_used + 10_000 + self.rng.below(30_000),
            gas_price: gas_price.clone(),
            input: scripted.input,
            nonce,
        });
        for node in scripted.traces {
            all_traces.push(TraceRecord {
                block_number,
                tx_hash: Some(tx_hash),
                trace_address: node.trace_address,
                error: node.error,
                action: node.action,
            });
        }
    }

    // ---- block loop -------------------------------------------------------

    /// Gas price regime: a slowly drifting base with occasional block-level
    /// spikes; each transaction jitters around the block base.
    fn block_base_price(&mut self, n: u64) -> u128 {
        let drift = 50_000_000_000u128.saturating_sub(n as u128 * 28_000_000);
        let base = drift.max(2_000_000_000);
        if self.rng.chance(4) {
            base * self.rng.range(5, 12) as u128
        } else {
            base
        }
    }

    fn tx_gas_price(&mut self, block_base: u128) -> Amount256 {
        let pct = self.rng.range(80, 125) as u128;
        Amount256::from((block_base * pct / 100).max(1_000_000))
    }

    fn run(mut self) -> GeneratedFixture {
        let mut timestamp = GENESIS_TIMESTAMP;
        let mut parent_hash = Hash32::ZERO;

        let max_txs = (self.spec.mean_txs_per_block * 2.0).round() as u64;

        for n in 0..self.spec.n_blocks {
            let miner_index = self.rng.below(self.miners.len() as u64) as usize;
            let miner = self.miners[miner_index].address;
            let miner_extra = Bytes(self.miners[miner_index].extra.clone());
            for word in self.miners[miner_index].words {
                *self.miner_word_counts.entry((*word).to_string()).or_default() += 1;
            }
            if n > 0 {
                timestamp += self.rng.range(12, 19);
            }

            let block_base = self.block_base_price(n);
            let tx_count = if n == 0 || max_txs == 0 { 0 } else { self.rng.below(max_txs + 1) };

            let mut raw_txs = Vec::new();
            let mut receipts = Vec::new();
            let mut traces = Vec::new();
            let mut cumulative_gas = 0u64;
            let mut next_log_index = 0u32;

            for i in 0..tx_count {
                let gas_price = self.tx_gas_price(block_base);
                let weights = self.spec.scenario_mix.weights();
                let scenario = SCENARIOS[self.rng.weighted(&weights)];
                let scripted = match scenario {
                    Scenario::PlainTransfer => self.script_plain(&gas_price),
                    Scenario::ContractDeploy => self.script_deploy(&gas_price),
                    Scenario::ContractCallTree => self.script_call_tree(&gas_price, 10),
                    Scenario::Erc20Lifecycle => self.script_erc20(&gas_price),
                    Scenario::Erc721Lifecycle => self.script_erc721(&gas_price),
                    Scenario::SuicideStorm => self.script_storm(&gas_price),
                    Scenario::ErrorBurst => self.script_call_tree(&gas_price, 60),
                };
                let scripted = match scripted.or_else(|| self.script_plain(&gas_price)) {
                    Some(s) => s,
                    None => continue, // nobody can pay; skip the slot
                };
                self.commit_tx(
                    n,
                    i as u32,
                    miner,
                    &gas_price,
                    scripted,
                    &mut raw_txs,
                    &mut receipts,
                    &mut traces,
                    &mut cumulative_gas,
                    &mut next_log_index,
                );
            }

            // block and uncle rewards
            let block_reward = Amount256::from(BLOCK_REWARD_WEI);
            self.credit(miner, &block_reward);
            self.reward_total += BigUint::from(BLOCK_REWARD_WEI);
            traces.push(TraceRecord {
                block_number: n,
                tx_hash: None,
                trace_address: vec![],
                error: None,
                action: TraceAction::Reward(RewardTrace {
                    author: miner,
                    value: block_reward,
                    reward_type: RewardKind::Block,
                }),
            });
            if self.rng.chance(10) {
                let uncle_miner = self.miners[self.rng.below(self.miners.len() as u64) as usize].address;
                let uncle_reward = Amount256::from(UNCLE_REWARD_WEI);
                self.credit(uncle_miner, &uncle_reward);
                self.reward_total += BigUint::from(UNCLE_REWARD_WEI);
                traces.push(TraceRecord {
                    block_number: n,
                    tx_hash: None,
                    trace_address: vec![],
                    error: None,
                    action: TraceAction::Reward(RewardTrace {
                        author: uncle_miner,
                        value: uncle_reward,
                        reward_type: RewardKind::Uncle,
                    }),
                });
            }

            let size = 550 + raw_txs.iter().map(|tx| tx.input.len() as u64 + 170).sum::<u64>();
            let hash = derive_hash(tags::BLOCK_HASH, self.spec.seed, n, 0);
            let block = RawBlock {
                number: n,
                hash,
                parent_hash,
                miner,
                timestamp,
                gas_limit: 30_000_000,
                gas_used: cumulative_gas,
                size,
                extra_data: miner_extra,
                transactions: raw_txs,
            };
            parent_hash = hash;

            self.rows_blocks.push(Self::block_row(&block));
            let bundle = BlockBundle::new(block, receipts, traces).expect("fixture bundles satisfy invariants");
            self.bundles.push(bundle);
        }

        self.check_conservation();
        let ledger = self.build_ledger();
        GeneratedFixture { bundles: self.bundles, ledger }
    }

    fn block_row(block: &RawBlock) -> BlockRow {
        let prices: Vec<&Amount256> = block.transactions.iter().map(|tx| &tx.gas_price).collect();
        let (min, avg, max) = if prices.is_empty() {
            (None, None, None)
        } else {
            let min = (*prices.iter().min().unwrap()).clone();
            let max = (*prices.iter().max().unwrap()).clone();
            let sum = prices.iter().fold(BigUint::from(0u8), |acc, p| acc + p.as_biguint());
            let avg = div_decimal_half_even(&sum, &BigUint::from(prices.len() as u64), 2);
            (Some(min), Some(avg), Some(max))
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

    /// Conservation by construction: all final balances sum to genesis
    /// plus minted rewards — fees are redirected to miners, never burned.
    fn check_conservation(&self) {
        let final_sum = self.balances.values().fold(BigUint::from(0u8), |acc, v| acc + v.as_biguint());
        let genesis_sum = self.genesis.values().fold(BigUint::from(0u8), |acc, v| acc + v.as_biguint());
        assert_eq!(final_sum, genesis_sum + &self.reward_total, "fixture conservation violated");
    }

    // ---- ledger assembly ---------------------------------------------------

    fn build_ledger(&self) -> FixtureLedger {
        let token_rows: Vec<TokenMetadataRow> = {
            let addresses: BTreeSet<Address> = self.rows_erc20.iter().map(|r| r.token).collect();
            addresses.into_iter().map(TokenMetadataRow::bare).collect()
        };

        let expected_rows = ExpectedRows {
            dataset1_blocks: self.rows_blocks.iter().map(BlockRow::to_record).collect(),
            dataset1_txs: self.rows_txs.iter().map(TxRow::to_record).collect(),
            dataset2: self.rows_internal.iter().map(InternalEtherTxRow::to_record).collect(),
            dataset3: self.rows_contracts.iter().map(ContractInfoRow::to_record).collect(),
            dataset4: self.rows_calls.iter().map(ContractCallRow::to_record).collect(),
            dataset5_transfers: self.rows_erc20.iter().map(Erc20TransferRow::to_record).collect(),
            dataset5_tokens: token_rows.iter().map(TokenMetadataRow::to_record).collect(),
            dataset6: self.rows_erc721.iter().map(Erc721TransferRow::to_record).collect(),
        };
        let expected_row_counts = ExpectedRowCounts {
            dataset1_blocks: expected_rows.dataset1_blocks.len() as u64,
            dataset1_txs: expected_rows.dataset1_txs.len() as u64,
            dataset2: expected_rows.dataset2.len() as u64,
            dataset3: expected_rows.dataset3.len() as u64,
            dataset4: expected_rows.dataset4.len() as u64,
            dataset5_transfers: expected_rows.dataset5_transfers.len() as u64,
            dataset5_tokens: expected_rows.dataset5_tokens.len() as u64,
            dataset6: expected_rows.dataset6.len() as u64,
        };

        FixtureLedger {
            spec: self.spec.clone(),
            genesis_allocations: self.genesis.clone(),
            final_balances: self.balances.clone(),
            token_metadata: self.tokens.iter().map(|t| (t.address, t.info.clone())).collect(),
            expected_row_counts,
            expected_rows,
            expected_stats: self.expected_stats(&token_rows),
        }
    }

    fn expected_stats(&self, token_rows: &[TokenMetadataRow]) -> StatsReport {
        let mut report = StatsReport::default();

        // table 1 and the block/interval series
        let blocks = &self.rows_blocks;
        let tx_count: u64 = blocks.iter().map(|b| b.tx_count as u64).sum();
        let miners: HashSet<Address> = blocks.iter().map(|b| b.miner).collect();
        let mean_block_time = if blocks.len() >= 2 {
            let delta = blocks.last().unwrap().timestamp - blocks.first().unwrap().timestamp;
            Some(div_u128_half_even(delta as u128, (blocks.len() - 1) as u128, 2))
        } else {
            None
        };
        let mean_txs = div_u128_half_even(tx_count as u128, blocks.len() as u128, 2);
        report.table1 = Some(Table1 {
            block_count: blocks.len() as u64,
            tx_count,
            miner_addresses: miners.len() as u64,
            mean_txs_per_block: mean_txs.clone(),
            mean_block_time_seconds: mean_block_time.clone(),
            mean_block_size_bytes: div_u128_half_even(
                blocks.iter().map(|b| b.size as u128).sum(),
                blocks.len() as u128,
                2,
            ),
        });
        if let Some(time) = &mean_block_time {
            let tx_cents = cents(&mean_txs);
            let time_cents = cents(time);
            if time_cents > 0 {
                report.throughput_tx_per_second = Some(div_u128_half_even(tx_cents, time_cents, 2));
            }
        }

        let mut tx_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
        for b in blocks {
            *tx_per_interval.entry(interval_start(b.number)).or_default() += b.tx_count as u64;
        }
        report
            .series
            .insert("tx_count".to_string(), tx_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect());

        let mut interval_gas: BTreeMap<u64, (Amount256, Amount256, BigUint, u64)> = BTreeMap::new();
        for tx in &self.rows_txs {
            let key = interval_start(tx.block_number);
            match interval_gas.get_mut(&key) {
                Some((min, max, sum, count)) => {
                    if tx.gas_price < *min {
                        *min = tx.gas_price.clone();
                    }
                    if tx.gas_price > *max {
                        *max = tx.gas_price.clone();
                    }
                    *sum += tx.gas_price.as_biguint();
                    *count += 1;
                }
                None => {
                    interval_gas.insert(
                        key,
                        (tx.gas_price.clone(), tx.gas_price.clone(), tx.gas_price.as_biguint().clone(), 1),
                    );
                }
            }
        }
        report.series.insert(
            "gas_price_interval_min".to_string(),
            interval_gas.iter().map(|(k, (min, _, _, _))| (*k, min.to_string())).collect(),
        );
        report.series.insert(
            "gas_price_interval_avg".to_string(),
            interval_gas
                .iter()
                .map(|(k, (_, _, sum, count))| (*k, div_decimal_half_even(sum, &BigUint::from(*count), 2)))
                .collect(),
        );
        report.series.insert(
            "gas_price_interval_max".to_string(),
            interval_gas.iter().map(|(k, (_, max, _, _))| (*k, max.to_string())).collect(),
        );
        report.series.insert(
            "gas_price_block_min".to_string(),
            blocks
                .iter()
                .filter_map(|b| b.gas_price_min.as_ref().map(|v| (b.number, v.to_string())))
                .collect(),
        );
        report.series.insert(
            "gas_price_block_avg".to_string(),
            blocks.iter().filter_map(|b| b.gas_price_avg.as_ref().map(|v| (b.number, v.clone()))).collect(),
        );
        report.series.insert(
            "gas_price_block_max".to_string(),
            blocks
                .iter()
                .filter_map(|b| b.gas_price_max.as_ref().map(|v| (b.number, v.to_string())))
                .collect(),
        );

        // miner words, tallied from the scripted tags
        let mut miner_words: Vec<(String, u64)> = self.miner_word_counts.clone().into_iter().collect();
        miner_words.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        report.word_frequencies.insert("miner_text".to_string(), miner_words);

        // table 2, Ether series, value histogram
        let internal = &self.rows_internal;
        let mut addresses: HashSet<Address> = HashSet::new();
        let mut wei_sum = BigUint::from(0u8);
        let mut wei_max: Option<&Amount256> = None;
        let mut ether_per_interval: BTreeMap<u64, BigUint> = BTreeMap::new();
        let mut ether_hist: HashMap<String, u64> = HashMap::new();
        for row in internal {
            addresses.insert(row.from);
            addresses.insert(row.to);
            wei_sum += row.value_wei.as_biguint();
            if wei_max.is_none_or(|m| row.value_wei > *m) {
                wei_max = Some(&row.value_wei);
            }
            *ether_per_interval.entry(interval_start(row.block_number)).or_default() += row.value_wei.as_biguint();
            *ether_hist.entry(ether_bucket_label(ether_bucket(&row.value_wei))).or_default() += 1;
        }
        report.table2 = Some(Table2 {
            transactions: internal.len() as u64,
            addresses: addresses.len() as u64,
            mean_ether: (!internal.is_empty()).then(|| {
                div_decimal_half_even(
                    &wei_sum,
                    &(BigUint::from(internal.len() as u64) * BigUint::from(xbeth_core::WEI_PER_ETHER)),
                    2,
                )
            }),
            max_ether: wei_max.map(wei_to_ether_2dp),
        });
        report.series.insert(
            "ether_transferred".to_string(),
            ether_per_interval.into_iter().map(|(k, wei)| (k, biguint_wei_to_ether_exact(&wei))).collect(),
        );
        report.histograms.insert(
            "ether_value_distribution".to_string(),
            ether_bucket_order()
                .into_iter()
                .map(ether_bucket_label)
                .map(|label| {
                    let count = ether_hist.get(&label).copied().unwrap_or(0);
                    (label, count)
                })
                .collect(),
        );

        // table 3, code size histogram, creations series
        let contracts = &self.rows_contracts;
        let creators: HashSet<Address> = contracts.iter().filter_map(|r| r.creator).collect();
        let refunded: HashSet<Address> = contracts.iter().filter(|r| r.deleted).filter_map(|r| r.refund_address).collect();
        let deleted = contracts.iter().filter(|r| r.deleted).count() as u64;
        let sizes: Vec<u64> = contracts.iter().filter_map(|r| r.deployed_code_size_bytes).collect();
        let mut size_hist: BTreeMap<u64, u64> = BTreeMap::new();
        for s in &sizes {
            *size_hist.entry(code_size_bucket(*s)).or_default() += 1;
        }
        let mut created_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
        for row in contracts {
            if let Some(b) = row.creation_block {
                *created_per_interval.entry(interval_start(b)).or_default() += 1;
            }
        }
        report.table3 = Some(Table3 {
            created_contracts: contracts.iter().filter(|r| r.creator.is_some()).count() as u64,
            creator_addresses: creators.len() as u64,
            deleted_contracts: deleted,
            refunded_addresses: refunded.len() as u64,
            mean_code_size_bytes: (!sizes.is_empty())
                .then(|| div_u128_half_even(sizes.iter().map(|s| *s as u128).sum(), sizes.len() as u128, 2)),
        });
        report.histograms.insert(
            "contract_code_size".to_string(),
            size_hist.into_iter().map(|(lo, count)| (code_size_bucket_label(lo), count)).collect(),
        );
        report.series.insert(
            "contracts_created".to_string(),
            created_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
        );

        // table 4, call distributions, selector ranking
        let calls = &self.rows_calls;
        let mut type_counts: HashMap<&'static str, u64> = HashMap::new();
        let mut error_counts: HashMap<String, u64> = HashMap::new();
        let mut selector_counts: HashMap<String, u64> = HashMap::new();
        let mut calls_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
        let mut errors_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
        let mut with_inputs = 0u64;
        let mut with_errors = 0u64;
        for row in calls {
            *type_counts.entry(row.call_type.as_str()).or_default() += 1;
            *calls_per_interval.entry(interval_start(row.block_number)).or_default() += 1;
            if row.input_size >= 4 {
                with_inputs += 1;
            }
            if let Some(sel) = &row.selector {
                *selector_counts.entry(sel.to_string()).or_default() += 1;
            }
            if let Some(error) = &row.error {
                with_errors += 1;
                *error_counts.entry(fixture_normalize_error(error)).or_default() += 1;
                *errors_per_interval.entry(interval_start(row.block_number)).or_default() += 1;
            }
        }
        report.table4 = Some(Table4 {
            contract_calls: calls.len() as u64,
            calls_with_inputs: with_inputs,
            calls_with_errors: with_errors,
        });
        report.histograms.insert(
            "call_types".to_string(),
            ["call", "delegatecall", "staticcall", "callcode"]
                .iter()
                .map(|name| (name.to_string(), type_counts.get(name).copied().unwrap_or(0)))
                .collect(),
        );
        let mut error_hist: Vec<(String, u64)> = KNOWN_ERROR_LABELS
            .iter()
            .map(|name| (name.to_string(), error_counts.get(*name).copied().unwrap_or(0)))
            .collect();
        let mut other_errors: Vec<(String, u64)> = error_counts
            .into_iter()
            .filter(|(k, _)| !KNOWN_ERROR_LABELS.contains(&k.as_str()))
            .collect();
        other_errors.sort();
        error_hist.extend(other_errors);
        report.histograms.insert("call_errors".to_string(), error_hist);
        report
            .series
            .insert("contract_calls".to_string(), calls_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect());
        report
            .series
            .insert("call_errors".to_string(), errors_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect());

        let top = if calls.is_empty() {
            Vec::new()
        } else {
            let mut ranked: Vec<(String, u64)> = selector_counts.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let mut cumulative = 0u64;
            ranked
                .into_iter()
                .take(10)
                .map(|(selector, count)| {
                    cumulative += count;
                    SelectorCount {
                        selector,
                        count,
                        cumulative_share: div_u128_half_even(cumulative as u128, calls.len() as u128, 4),
                    }
                })
                .collect()
        };
        report.top_selectors = Some(top);

        // tables 5/6, popularity, token-name words, turnover
        let mut holders20: HashSet<Address> = HashSet::new();
        let mut by_token20: HashMap<String, u64> = HashMap::new();
        for row in &self.rows_erc20 {
            if !row.from.is_zero() {
                holders20.insert(row.from);
            }
            if !row.to.is_zero() {
                holders20.insert(row.to);
            }
            *by_token20.entry(row.token.to_string()).or_default() += 1;
        }
        report.table5 = Some(Table5 {
            erc20_contracts: by_token20.len() as u64,
            erc20_transfers: self.rows_erc20.len() as u64,
            erc20_holders: holders20.len() as u64,
        });
        let mut pop20: Vec<(String, u64)> = by_token20.into_iter().collect();
        pop20.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        report.popularity.insert("erc20".to_string(), pop20);

        let mut holders721: HashSet<Address> = HashSet::new();
        let mut by_token721: HashMap<String, u64> = HashMap::new();
        for row in &self.rows_erc721 {
            if !row.from.is_zero() {
                holders721.insert(row.from);
            }
            if !row.to.is_zero() {
                holders721.insert(row.to);
            }
            *by_token721.entry(row.token.to_string()).or_default() += 1;
        }
        report.table6 = Some(Table6 {
            erc721_contracts: by_token721.len() as u64,
            erc721_transfers: self.rows_erc721.len() as u64,
            erc721_holders: holders721.len() as u64,
        });
        let mut pop721: Vec<(String, u64)> = by_token721.into_iter().collect();
        pop721.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        report.popularity.insert("erc721".to_string(), pop721.clone());

        // without a metadata endpoint the token file carries no names
        let _ = token_rows;
        report.word_frequencies.insert("token_names".to_string(), Vec::new());

        if let Some((top_token, _)) = pop721.first() {
            let token: Address = top_token.parse().expect("fixture token address");
            let mut birth: HashMap<&Amount256, u64> = HashMap::new();
            for row in self.rows_erc721.iter().filter(|r| r.token == token) {
                if row.from.is_zero() {
                    let entry = birth.entry(&row.token_id).or_insert(row.block_number);
                    if row.block_number < *entry {
                        *entry = row.block_number;
                    }
                }
            }
            let mut turnover: HashMap<&Amount256, u64> = birth.keys().map(|k| (*k, 0)).collect();
            for row in self.rows_erc721.iter().filter(|r| r.token == token) {
                if !row.from.is_zero() {
                    if let Some(count) = turnover.get_mut(&row.token_id) {
                        *count += 1;
                    }
                }
            }
            let mut per_bucket: BTreeMap<u64, u64> = BTreeMap::new();
            for (id, born) in &birth {
                *per_bucket.entry(interval_start(*born)).or_default() += turnover[*id];
            }
            report.series.insert(
                "erc721_turnover_by_birth_block".to_string(),
                per_bucket.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            );
        }

        report
    }
}

/// The fixture's own error taxonomy: a static table over exactly the
/// labels it scripts, kept separate from the engine's normalizer.
fn fixture_normalize_error(label: &str) -> String {
    for (wire, normalized, _) in ERROR_POOL {
        if wire == label {
            return normalized.to_string();
        }
    }
    unreachable!("fixture scripted an unknown error label {label:?}")
}

fn cents(two_decimals: &str) -> u128 {
    let (int_part, frac_part) = two_decimals.split_once('.').expect("two-decimal string");
    int_part.parse::<u128>().expect("integer part") * 100 + frac_part.parse::<u128>().expect("fraction part")
}

fn ten_pow(exp: u32) -> Amount256 {
    let mut value = Amount256::from(1u64);
    let ten = Amount256::from(10u64);
    for _ in 0..exp {
        value = value.checked_mul(&ten).expect("power in range");
    }
    value
}
