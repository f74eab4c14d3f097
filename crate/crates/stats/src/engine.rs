//! The statistic operations. Every mean is computed on exact integers and
//! rounded half-even at emission; every ranked or keyed collection has a
//! total deterministic order.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;

use xbeth_core::decimal::{biguint_wei_to_ether_exact, div_decimal_half_even, div_u128_half_even, wei_to_ether_2dp};
use xbeth_core::{Address, Amount256};
use xbeth_datasets::{
    BlockRow, ContractCallRow, ContractInfoRow, Erc20TransferRow, Erc721TransferRow, InternalEtherTxRow,
    TokenMetadataRow, TxRow,
};
use xbeth_decode::decode_extra_text;

use crate::error::StatsError;
use crate::report::{SelectorCount, StatsReport, Table1, Table2, Table3, Table4, Table5, Table6};
use crate::taxonomy::*;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Parses one of our own two-decimal strings back into integer hundredths.
fn parse_2dp_cents(text: &str) -> Option<u128> {
    let (int_part, frac_part) = text.split_once('.')?;
    if frac_part.len() != 2 {
        return None;
    }
    let int_val: u128 = int_part.parse().ok()?;
    let frac_val: u128 = frac_part.parse().ok()?;
    Some(int_val * 100 + frac_val)
}

/// Block/transaction scalars and the per-interval and per-block series.
pub fn stats_blocks(blocks: &[BlockRow], txs: &[TxRow], report: &mut StatsReport) -> Result<(), StatsError> {
    if blocks.is_empty() {
        return Err(StatsError::EmptyReport);
    }
    let block_count = blocks.len() as u64;
    let tx_count: u64 = blocks.iter().map(|b| b.tx_count as u64).sum();
    let miners: HashSet<Address> = blocks.iter().map(|b| b.miner).collect();

    let mean_block_time_seconds = if blocks.len() >= 2 {
        let first = blocks.first().unwrap().timestamp;
        let last = blocks.last().unwrap().timestamp;
        if last < first {
            return Err(StatsError::InvalidData("block timestamps run backwards".to_string()));
        }
        // consecutive deltas telescope to (last - first) / (n - 1)
        Some(div_u128_half_even((last - first) as u128, (blocks.len() - 1) as u128, 2))
    } else {
        None
    };

    let size_sum: u128 = blocks.iter().map(|b| b.size as u128).sum();
    let table1 = Table1 {
        block_count,
        tx_count,
        miner_addresses: miners.len() as u64,
        mean_txs_per_block: div_u128_half_even(tx_count as u128, block_count as u128, 2),
        mean_block_time_seconds,
        mean_block_size_bytes: div_u128_half_even(size_sum, block_count as u128, 2),
    };
    report.table1 = Some(table1);

    // per-interval transaction counts
    let mut tx_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
    for block in blocks {
        *tx_per_interval.entry(interval_start(block.number)).or_default() += block.tx_count as u64;
    }
    report
        .series
        .insert("tx_count".to_string(), tx_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect());

    // per-interval gas price min/avg/max over individual transactions
    struct GasAgg {
        min: Amount256,
        max: Amount256,
        sum: BigUint,
        count: u64,
    }
    let mut per_interval: BTreeMap<u64, GasAgg> = BTreeMap::new();
    for tx in txs {
        let key = interval_start(tx.block_number);
        match per_interval.get_mut(&key) {
            Some(agg) => {
                if tx.gas_price < agg.min {
                    agg.min = tx.gas_price.clone();
                }
                if tx.gas_price > agg.max {
                    agg.max = tx.gas_price.clone();
                }
                agg.sum += tx.gas_price.as_biguint();
                agg.count += 1;
            }
            None => {
                per_interval.insert(
                    key,
                    GasAgg {
                        min: tx.gas_price.clone(),
                        max: tx.gas_price.clone(),
                        sum: tx.gas_price.as_biguint().clone(),
                        count: 1,
                    },
                );
            }
        }
    }
    let mut min_series = Vec::new();
    let mut avg_series = Vec::new();
    let mut max_series = Vec::new();
    for (key, agg) in &per_interval {
        min_series.push((*key, agg.min.to_string()));
        avg_series.push((*key, div_decimal_half_even(&agg.sum, &big(agg.count), 2)));
        max_series.push((*key, agg.max.to_string()));
    }
    report.series.insert("gas_price_interval_min".to_string(), min_series);
    report.series.insert("gas_price_interval_avg".to_string(), avg_series);
    report.series.insert("gas_price_interval_max".to_string(), max_series);

    // per-block gas price view, skipping transaction-free blocks
    let mut block_min = Vec::new();
    let mut block_avg = Vec::new();
    let mut block_max = Vec::new();
    for b in blocks {
        if let (Some(min), Some(avg), Some(max)) = (&b.gas_price_min, &b.gas_price_avg, &b.gas_price_max) {
            block_min.push((b.number, min.to_string()));
            block_avg.push((b.number, avg.clone()));
            block_max.push((b.number, max.to_string()));
        }
    }
    report.series.insert("gas_price_block_min".to_string(), block_min);
    report.series.insert("gas_price_block_avg".to_string(), block_avg);
    report.series.insert("gas_price_block_max".to_string(), block_max);
    Ok(())
}

/// Transactions per second: the ratio of the two table-1 means.
pub fn stats_throughput(report: &mut StatsReport) -> Result<(), StatsError> {
    let Some(table1) = &report.table1 else { return Ok(()) };
    let Some(time) = &table1.mean_block_time_seconds else { return Ok(()) };
    let tx_cents = parse_2dp_cents(&table1.mean_txs_per_block)
        .ok_or_else(|| StatsError::InvalidData(format!("bad mean {:?}", table1.mean_txs_per_block)))?;
    let time_cents =
        parse_2dp_cents(time).ok_or_else(|| StatsError::InvalidData(format!("bad mean block time {time:?}")))?;
    if time_cents == 0 {
        return Err(StatsError::ZeroBlockTime);
    }
    report.throughput_tx_per_second = Some(div_u128_half_even(tx_cents, time_cents, 2));
    Ok(())
}

/// Internal Ether scalars, interval series, and the value histogram.
pub fn stats_ether(rows: &[InternalEtherTxRow], report: &mut StatsReport) {
    let mut addresses: HashSet<Address> = HashSet::new();
    let mut sum = BigUint::from(0u8);
    let mut max: Option<&Amount256> = None;
    let mut per_interval: BTreeMap<u64, BigUint> = BTreeMap::new();
    let mut buckets: HashMap<String, u64> = HashMap::new();
    for row in rows {
        addresses.insert(row.from);
        addresses.insert(row.to);
        sum += row.value_wei.as_biguint();
        if max.is_none_or(|m| row.value_wei > *m) {
            max = Some(&row.value_wei);
        }
        *per_interval.entry(interval_start(row.block_number)).or_default() += row.value_wei.as_biguint();
        *buckets.entry(ether_bucket_label(ether_bucket(&row.value_wei))).or_default() += 1;
    }

    report.table2 = Some(Table2 {
        transactions: rows.len() as u64,
        addresses: addresses.len() as u64,
        mean_ether: if rows.is_empty() {
            None
        } else {
            // mean in Ether = sum_wei / (n * 10^18)
            Some(div_decimal_half_even(
                &sum,
                &(big(rows.len() as u64) * BigUint::from(xbeth_core::WEI_PER_ETHER)),
                2,
            ))
        },
        max_ether: max.map(wei_to_ether_2dp),
    });

    report.series.insert(
        "ether_transferred".to_string(),
        per_interval.into_iter().map(|(k, wei)| (k, biguint_wei_to_ether_exact(&wei))).collect(),
    );

    let hist = ether_bucket_order()
        .into_iter()
        .map(ether_bucket_label)
        .map(|label| {
            let count = buckets.get(&label).copied().unwrap_or(0);
            (label, count)
        })
        .collect();
    report.histograms.insert("ether_value_distribution".to_string(), hist);
}

/// Contract lifecycle scalars, the code size histogram, and the creations
/// series.
pub fn stats_contracts(rows: &[ContractInfoRow], report: &mut StatsReport) {
    let mut creators: HashSet<Address> = HashSet::new();
    let mut refunded: HashSet<Address> = HashSet::new();
    let mut created = 0u64;
    let mut deleted = 0u64;
    let mut size_sum: u128 = 0;
    let mut size_count = 0u64;
    let mut size_buckets: HashMap<u64, u64> = HashMap::new();
    let mut created_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
    for row in rows {
        if let Some(creator) = row.creator {
            created += 1;
            creators.insert(creator);
        }
        if row.deleted {
            deleted += 1;
            if let Some(addr) = row.refund_address {
                refunded.insert(addr);
            }
        }
        if let Some(size) = row.deployed_code_size_bytes {
            size_sum += size as u128;
            size_count += 1;
            *size_buckets.entry(code_size_bucket(size)).or_default() += 1;
        }
        if let Some(block) = row.creation_block {
            *created_per_interval.entry(interval_start(block)).or_default() += 1;
        }
    }
    report.table3 = Some(Table3 {
        created_contracts: created,
        creator_addresses: creators.len() as u64,
        deleted_contracts: deleted,
        refunded_addresses: refunded.len() as u64,
        mean_code_size_bytes: (size_count > 0).then(|| div_u128_half_even(size_sum, size_count as u128, 2)),
    });
    let ordered: BTreeMap<u64, u64> = size_buckets.into_iter().collect();
    report.histograms.insert(
        "contract_code_size".to_string(),
        ordered.into_iter().map(|(lo, count)| (code_size_bucket_label(lo), count)).collect(),
    );
    report.series.insert(
        "contracts_created".to_string(),
        created_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
    );
}

/// Call scalars, type/error distributions, interval series, and the top-N
/// selector ranking with cumulative share of all calls.
pub fn stats_calls(rows: &[ContractCallRow], top_n: usize, report: &mut StatsReport) {
    let total = rows.len() as u64;
    let mut with_inputs = 0u64;
    let mut with_errors = 0u64;
    let mut call_types: HashMap<String, u64> = HashMap::new();
    let mut error_labels: HashMap<String, u64> = HashMap::new();
    let mut selector_counts: HashMap<String, u64> = HashMap::new();
    let mut calls_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
    let mut errors_per_interval: BTreeMap<u64, u64> = BTreeMap::new();
    for row in rows {
        *call_types.entry(row.call_type.as_str().to_string()).or_default() += 1;
        *calls_per_interval.entry(interval_start(row.block_number)).or_default() += 1;
        if row.input_size >= 4 {
            with_inputs += 1;
        }
        if let Some(selector) = &row.selector {
            *selector_counts.entry(selector.to_string()).or_default() += 1;
        }
        if let Some(error) = &row.error {
            with_errors += 1;
            *error_labels.entry(normalize_error_label(error)).or_default() += 1;
            *errors_per_interval.entry(interval_start(row.block_number)).or_default() += 1;
        }
    }
    report.table4 = Some(Table4 { contract_calls: total, calls_with_inputs: with_inputs, calls_with_errors: with_errors });

    // fixed order for call types; the four known error classes first, then
    // any other:* labels ascending
    let type_hist = ["call", "delegatecall", "staticcall", "callcode"]
        .iter()
        .map(|name| (name.to_string(), call_types.get(*name).copied().unwrap_or(0)))
        .collect();
    report.histograms.insert("call_types".to_string(), type_hist);

    let mut error_hist: Vec<(String, u64)> = KNOWN_ERROR_LABELS
        .iter()
        .map(|name| (name.to_string(), error_labels.get(*name).copied().unwrap_or(0)))
        .collect();
    let mut others: Vec<(String, u64)> = error_labels
        .into_iter()
        .filter(|(label, _)| !KNOWN_ERROR_LABELS.contains(&label.as_str()))
        .collect();
    others.sort();
    error_hist.extend(others);
    report.histograms.insert("call_errors".to_string(), error_hist);

    report
        .series
        .insert("contract_calls".to_string(), calls_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect());
    report
        .series
        .insert("call_errors".to_string(), errors_per_interval.into_iter().map(|(k, v)| (k, v.to_string())).collect());

    let top = if total == 0 {
        Vec::new()
    } else {
        let ranked = rank_counts(selector_counts);
        let mut cumulative = 0u64;
        ranked
            .into_iter()
            .take(top_n)
            .map(|(selector, count)| {
                cumulative += count;
                SelectorCount {
                    selector,
                    count,
                    cumulative_share: div_u128_half_even(cumulative as u128, total as u128, 4),
                }
            })
            .collect()
    };
    report.top_selectors = Some(top);
}

/// Per-standard token scalars, popularity rankings, token-name word
/// frequencies, and the turnover series of the busiest ERC721 token.
pub fn stats_tokens(
    erc20: &[Erc20TransferRow],
    tokens: &[TokenMetadataRow],
    erc721: &[Erc721TransferRow],
    report: &mut StatsReport,
) {
    let mut holders20: HashSet<Address> = HashSet::new();
    let mut tokens20: HashMap<String, u64> = HashMap::new();
    for row in erc20 {
        if !row.from.is_zero() {
            holders20.insert(row.from);
        }
        if !row.to.is_zero() {
            holders20.insert(row.to);
        }
        *tokens20.entry(row.token.to_string()).or_default() += 1;
    }
    report.table5 = Some(Table5 {
        erc20_contracts: tokens20.len() as u64,
        erc20_transfers: erc20.len() as u64,
        erc20_holders: holders20.len() as u64,
    });
    report.popularity.insert("erc20".to_string(), rank_counts(tokens20));

    let mut holders721: HashSet<Address> = HashSet::new();
    let mut tokens721: HashMap<Address, u64> = HashMap::new();
    for row in erc721 {
        if !row.from.is_zero() {
            holders721.insert(row.from);
        }
        if !row.to.is_zero() {
            holders721.insert(row.to);
        }
        *tokens721.entry(row.token).or_default() += 1;
    }
    report.table6 = Some(Table6 {
        erc721_contracts: tokens721.len() as u64,
        erc721_transfers: erc721.len() as u64,
        erc721_holders: holders721.len() as u64,
    });
    let ranked721 = rank_counts(tokens721);
    report
        .popularity
        .insert("erc721".to_string(), ranked721.iter().map(|(a, c)| (a.to_string(), *c)).collect());

    let mut words: HashMap<String, u64> = HashMap::new();
    for token in tokens {
        if let Some(name) = &token.name {
            for word in decode_extra_text(name.as_bytes()) {
                *words.entry(word).or_default() += 1;
            }
        }
    }
    report.word_frequencies.insert("token_names".to_string(), rank_counts(words));

    // turnover of the most transferred ERC721 token
    if let Some((token, _)) = ranked721.first() {
        let series = turnover_by_birth_block(erc721, *token, INTERVAL_BLOCKS);
        report.series.insert(
            "erc721_turnover_by_birth_block".to_string(),
            series.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
        );
    }
}

/// Word frequencies over miner extra-data across all blocks.
pub fn stats_miner_text(blocks: &[BlockRow], report: &mut StatsReport) {
    let mut words: HashMap<String, u64> = HashMap::new();
    for block in blocks {
        for word in decode_extra_text(block.extra_data.as_slice()) {
            *words.entry(word).or_default() += 1;
        }
    }
    report.word_frequencies.insert("miner_text".to_string(), rank_counts(words));
}

/// Turnover per birth bucket for one token: a token id's birth block is
/// the block of its first mint (transfer from the zero address), its
/// turnover the count of its non-mint transfers. Ids transferred in range
/// but never minted in range have no birth and are skipped.
pub fn turnover_by_birth_block(rows: &[Erc721TransferRow], token: Address, bucket: u64) -> Vec<(u64, u64)> {
    let mut birth: HashMap<&Amount256, u64> = HashMap::new();
    for row in rows.iter().filter(|r| r.token == token) {
        if row.from.is_zero() {
            let entry = birth.entry(&row.token_id).or_insert(row.block_number);
            if row.block_number < *entry {
                *entry = row.block_number;
            }
        }
    }
    let mut turnover: HashMap<&Amount256, u64> = birth.keys().map(|id| (*id, 0u64)).collect();
    for row in rows.iter().filter(|r| r.token == token) {
        if !row.from.is_zero() {
            if let Some(count) = turnover.get_mut(&row.token_id) {
                *count += 1;
            }
        }
    }
    let mut per_bucket: BTreeMap<u64, u64> = BTreeMap::new();
    for (id, born_at) in &birth {
        let key = born_at / bucket * bucket;
        *per_bucket.entry(key).or_default() += turnover[*id];
    }
    per_bucket.into_iter().collect()
}

/// Inputs available to one report run; absent datasets leave their report
/// sections absent.
#[derive(Debug, Default)]
pub struct StatsInputs {
    pub blocks: Option<Vec<BlockRow>>,
    pub txs: Option<Vec<TxRow>>,
    pub internal: Option<Vec<InternalEtherTxRow>>,
    pub contracts: Option<Vec<ContractInfoRow>>,
    pub calls: Option<Vec<ContractCallRow>>,
    pub erc20: Option<Vec<Erc20TransferRow>>,
    pub tokens: Option<Vec<TokenMetadataRow>>,
    pub erc721: Option<Vec<Erc721TransferRow>>,
}

/// Default ranking depth for the selector table.
pub const DEFAULT_TOP_N: usize = 10;

/// Runs every statistic whose inputs are present.
pub fn assemble_report(inputs: &StatsInputs, top_n: usize) -> Result<StatsReport, StatsError> {
    let mut report = StatsReport::default();
    if let Some(blocks) = &inputs.blocks {
        let empty = Vec::new();
        let txs = inputs.txs.as_ref().unwrap_or(&empty);
        stats_blocks(blocks, txs, &mut report)?;
        stats_throughput(&mut report)?;
        stats_miner_text(blocks, &mut report);
    }
    if let Some(internal) = &inputs.internal {
        stats_ether(internal, &mut report);
    }
    if let Some(contracts) = &inputs.contracts {
        stats_contracts(contracts, &mut report);
    }
    if let Some(calls) = &inputs.calls {
        stats_calls(calls, top_n, &mut report);
    }
    if let (Some(erc20), Some(erc721)) = (&inputs.erc20, &inputs.erc721) {
        let empty = Vec::new();
        let tokens = inputs.tokens.as_ref().unwrap_or(&empty);
        stats_tokens(erc20, tokens, erc721, &mut report);
    }
    Ok(report)
}
