//! The machine-readable statistics report. Field order and map key order
//! are fixed, so identical inputs serialize to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Block and transaction scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1 {
    pub block_count: u64,
    pub tx_count: u64,
    pub miner_addresses: u64,
    /// Two-decimal strings, rounded half-even at emission.
    pub mean_txs_per_block: String,
    /// Absent when the range holds a single block (no timestamp deltas).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_block_time_seconds: Option<String>,
    pub mean_block_size_bytes: String,
}

/// Internal Ether transaction scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2 {
    pub transactions: u64,
    pub addresses: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_ether: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ether: Option<String>,
}

/// Contract lifecycle scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3 {
    pub created_contracts: u64,
    pub creator_addresses: u64,
    pub deleted_contracts: u64,
    pub refunded_addresses: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_code_size_bytes: Option<String>,
}

/// Contract call scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table4 {
    pub contract_calls: u64,
    pub calls_with_inputs: u64,
    pub calls_with_errors: u64,
}

/// ERC20 scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table5 {
    pub erc20_contracts: u64,
    pub erc20_transfers: u64,
    pub erc20_holders: u64,
}

/// ERC721 scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table6 {
    pub erc721_contracts: u64,
    pub erc721_transfers: u64,
    pub erc721_holders: u64,
}

/// One ranked selector with its share of all contract calls, cumulative
/// from the top of the ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorCount {
    pub selector: String,
    pub count: u64,
    /// Four-decimal fraction of all calls, non-decreasing down the list.
    pub cumulative_share: String,
}

/// (key, value) series point; keys are interval starts or block numbers.
pub type SeriesPoint = (u64, String);
/// (bucket label, count) histogram entry in fixed bucket order.
pub type BucketCount = (String, u64);
/// (item, count) ranked entry: count descending, item ascending on ties.
pub type RankedCount = (String, u64);

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StatsReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table1: Option<Table1>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput_tx_per_second: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table2: Option<Table2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table3: Option<Table3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table4: Option<Table4>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table5: Option<Table5>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table6: Option<Table6>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_selectors: Option<Vec<SelectorCount>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<SeriesPoint>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub histograms: BTreeMap<String, Vec<BucketCount>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub popularity: BTreeMap<String, Vec<RankedCount>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub word_frequencies: BTreeMap<String, Vec<RankedCount>>,
}

impl StatsReport {
    /// Canonical serialized form written to `stats.json`.
    pub fn to_json_string(&self) -> Result<String, serde_json::Error> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}
