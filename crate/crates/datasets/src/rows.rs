//! Row types for the six datasets plus their CSV cell encodings.
//!
//! Cell conventions: amounts as decimal text, byte fields as 0x-hex,
//! absent optionals as empty cells, trace addresses dot-joined with the
//! root frame rendered as the empty string.

use std::str::FromStr;

use xbeth_core::{Address, Amount256, Bytes, CallKind, Hash32};
use xbeth_decode::Selector;

use crate::error::DatasetError;

pub fn encode_trace_address(addr: &[u32]) -> String {
    addr.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

pub fn decode_trace_address(cell: &str) -> Result<Vec<u32>, String> {
    if cell.is_empty() {
        return Ok(Vec::new());
    }
    cell.split('.')
        .map(|part| part.parse::<u32>().map_err(|e| format!("bad trace address {cell:?}: {e}")))
        .collect()
}

fn opt_cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn req<'a>(rec: &'a [String], i: usize) -> &'a str {
    rec.get(i).map(String::as_str).unwrap_or("")
}

fn parse_cell<T: FromStr>(rec: &[String], i: usize, what: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    req(rec, i).parse::<T>().map_err(|e| format!("column {i} ({what}): {e}"))
}

fn parse_opt<T: FromStr>(rec: &[String], i: usize, what: &str) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    let cell = req(rec, i);
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<T>().map(Some).map_err(|e| format!("column {i} ({what}): {e}"))
}

fn opt_string(rec: &[String], i: usize) -> Option<String> {
    let cell = req(rec, i);
    if cell.is_empty() {
        None
    } else {
        Some(cell.to_string())
    }
}

/// Dataset 1a: one row per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRow {
    pub number: u64,
    pub hash: Hash32,
    pub miner: Address,
    pub timestamp: u64,
    pub gas_limit: u64,
    pub gas_used: u64,
    pub size: u64,
    pub extra_data: Bytes,
    pub tx_count: u32,
    /// Empty on transaction-free blocks, like the other two price fields.
    pub gas_price_min: Option<Amount256>,
    /// Arithmetic mean of the block's transaction gas prices, rendered
    /// with two decimals at build time.
    pub gas_price_avg: Option<String>,
    pub gas_price_max: Option<Amount256>,
}

pub const BLOCKS_HEADER: [&str; 12] = [
    "number",
    "hash",
    "miner",
    "timestamp",
    "gas_limit",
    "gas_used",
    "size",
    "extra_data",
    "tx_count",
    "gas_price_min",
    "gas_price_avg",
    "gas_price_max",
];

impl BlockRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.number.to_string(),
            self.hash.to_string(),
            self.miner.to_string(),
            self.timestamp.to_string(),
            self.gas_limit.to_string(),
            self.gas_used.to_string(),
            self.size.to_string(),
            self.extra_data.to_string(),
            self.tx_count.to_string(),
            opt_cell(&self.gas_price_min),
            self.gas_price_avg.clone().unwrap_or_default(),
            opt_cell(&self.gas_price_max),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<BlockRow, String> {
        Ok(BlockRow {
            number: parse_cell(rec, 0, "number")?,
            hash: parse_cell(rec, 1, "hash")?,
            miner: parse_cell(rec, 2, "miner")?,
            timestamp: parse_cell(rec, 3, "timestamp")?,
            gas_limit: parse_cell(rec, 4, "gas_limit")?,
            gas_used: parse_cell(rec, 5, "gas_used")?,
            size: parse_cell(rec, 6, "size")?,
            extra_data: parse_cell(rec, 7, "extra_data")?,
            tx_count: parse_cell(rec, 8, "tx_count")?,
            gas_price_min: parse_opt(rec, 9, "gas_price_min")?,
            gas_price_avg: opt_string(rec, 10),
            gas_price_max: parse_opt(rec, 11, "gas_price_max")?,
        })
    }
}

/// Dataset 1b: one row per transaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxRow {
    pub tx_hash: Hash32,
    pub block_number: u64,
    pub tx_index: u32,
    pub from: Address,
    /// Absent for deployments.
    pub to: Option<Address>,
    pub value: Amount256,
    pub gas_price: Amount256,
    pub gas_used: u64,
    /// gas_used × gas_price, the fee credited to the miner.
    pub miner_reward: Amount256,
    pub input_size: u64,
    /// Error of the transaction's root trace, if any.
    pub error: Option<String>,
}

pub const TXS_HEADER: [&str; 11] = [
    "tx_hash",
    "block_number",
    "tx_index",
    "from",
    "to",
    "value",
    "gas_price",
    "gas_used",
    "miner_reward",
    "input_size",
    "error",
];

impl TxRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.tx_hash.to_string(),
            self.block_number.to_string(),
            self.tx_index.to_string(),
            self.from.to_string(),
            opt_cell(&self.to),
            self.value.to_string(),
            self.gas_price.to_string(),
            self.gas_used.to_string(),
            self.miner_reward.to_string(),
            self.input_size.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<TxRow, String> {
        Ok(TxRow {
            tx_hash: parse_cell(rec, 0, "tx_hash")?,
            block_number: parse_cell(rec, 1, "block_number")?,
            tx_index: parse_cell(rec, 2, "tx_index")?,
            from: parse_cell(rec, 3, "from")?,
            to: parse_opt(rec, 4, "to")?,
            value: parse_cell(rec, 5, "value")?,
            gas_price: parse_cell(rec, 6, "gas_price")?,
            gas_used: parse_cell(rec, 7, "gas_used")?,
            miner_reward: parse_cell(rec, 8, "miner_reward")?,
            input_size: parse_cell(rec, 9, "input_size")?,
            error: opt_string(rec, 10),
        })
    }
}

/// How an internal Ether movement was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InternalKind {
    /// A Call trace with value, itself and all ancestors error-free.
    CallValue,
    /// A Suicide trace refunding a positive balance.
    SuicideRefund,
}

impl InternalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            InternalKind::CallValue => "call_value",
            InternalKind::SuicideRefund => "suicide_refund",
        }
    }
}

impl FromStr for InternalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "call_value" => Ok(InternalKind::CallValue),
            "suicide_refund" => Ok(InternalKind::SuicideRefund),
            other => Err(format!("unknown internal kind {other:?}")),
        }
    }
}

/// Dataset 2: one row per effective internal Ether movement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalEtherTxRow {
    pub block_number: u64,
    pub tx_hash: Hash32,
    pub trace_address: Vec<u32>,
    pub kind: InternalKind,
    pub from: Address,
    pub to: Address,
    /// Always positive; zero-value movements produce no row.
    pub value_wei: Amount256,
}

pub const INTERNAL_HEADER: [&str; 7] =
    ["block_number", "tx_hash", "trace_address", "kind", "from", "to", "value_wei"];

impl InternalEtherTxRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.block_number.to_string(),
            self.tx_hash.to_string(),
            encode_trace_address(&self.trace_address),
            self.kind.as_str().to_string(),
            self.from.to_string(),
            self.to.to_string(),
            self.value_wei.to_string(),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<InternalEtherTxRow, String> {
        Ok(InternalEtherTxRow {
            block_number: parse_cell(rec, 0, "block_number")?,
            tx_hash: parse_cell(rec, 1, "tx_hash")?,
            trace_address: decode_trace_address(req(rec, 2))?,
            kind: parse_cell(rec, 3, "kind")?,
            from: parse_cell(rec, 4, "from")?,
            to: parse_cell(rec, 5, "to")?,
            value_wei: parse_cell(rec, 6, "value_wei")?,
        })
    }
}

/// Dataset 3: one row per contract lifecycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractInfoRow {
    pub contract_address: Address,
    pub creator: Option<Address>,
    pub creation_block: Option<u64>,
    pub creation_tx_hash: Option<Hash32>,
    pub initial_value: Option<Amount256>,
    pub creation_code: Option<Bytes>,
    pub deployed_code: Option<Bytes>,
    pub deployed_code_size_bytes: Option<u64>,
    pub deleted: bool,
    pub deletion_block: Option<u64>,
    pub refund_address: Option<Address>,
    pub refund_value: Option<Amount256>,
    /// Set when a suicide hits an address whose creation precedes the
    /// extracted range — a range-truncation artifact, not a failure.
    pub unseen_creation: bool,
}

pub const CONTRACTS_HEADER: [&str; 13] = [
    "contract_address",
    "creator",
    "creation_block",
    "creation_tx_hash",
    "initial_value",
    "creation_code",
    "deployed_code",
    "deployed_code_size_bytes",
    "deleted",
    "deletion_block",
    "refund_address",
    "refund_value",
    "flags",
];

impl ContractInfoRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.contract_address.to_string(),
            opt_cell(&self.creator),
            opt_cell(&self.creation_block),
            opt_cell(&self.creation_tx_hash),
            opt_cell(&self.initial_value),
            opt_cell(&self.creation_code),
            opt_cell(&self.deployed_code),
            opt_cell(&self.deployed_code_size_bytes),
            self.deleted.to_string(),
            opt_cell(&self.deletion_block),
            opt_cell(&self.refund_address),
            opt_cell(&self.refund_value),
            if self.unseen_creation { "unseen_creation".to_string() } else { String::new() },
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<ContractInfoRow, String> {
        let flags = req(rec, 12);
        let unseen_creation = match flags {
            "" => false,
            "unseen_creation" => true,
            other => return Err(format!("unknown flags {other:?}")),
        };
        Ok(ContractInfoRow {
            contract_address: parse_cell(rec, 0, "contract_address")?,
            creator: parse_opt(rec, 1, "creator")?,
            creation_block: parse_opt(rec, 2, "creation_block")?,
            creation_tx_hash: parse_opt(rec, 3, "creation_tx_hash")?,
            initial_value: parse_opt(rec, 4, "initial_value")?,
            creation_code: parse_opt(rec, 5, "creation_code")?,
            deployed_code: parse_opt(rec, 6, "deployed_code")?,
            deployed_code_size_bytes: parse_opt(rec, 7, "deployed_code_size_bytes")?,
            deleted: req(rec, 8).parse::<bool>().map_err(|e| format!("column 8 (deleted): {e}"))?,
            deletion_block: parse_opt(rec, 9, "deletion_block")?,
            refund_address: parse_opt(rec, 10, "refund_address")?,
            refund_value: parse_opt(rec, 11, "refund_value")?,
            unseen_creation,
        })
    }
}

/// Dataset 4: one row per Call trace at every depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractCallRow {
    pub block_number: u64,
    pub tx_hash: Hash32,
    pub trace_address: Vec<u32>,
    pub call_type: CallKind,
    pub from: Address,
    pub to: Address,
    /// Present when the input is at least 4 bytes.
    pub selector: Option<Selector>,
    pub input_size: u64,
    pub value_wei: Amount256,
    pub gas_used: u64,
    pub error: Option<String>,
}

pub const CALLS_HEADER: [&str; 11] = [
    "block_number",
    "tx_hash",
    "trace_address",
    "call_type",
    "from",
    "to",
    "selector",
    "input_size",
    "value_wei",
    "gas_used",
    "error",
];

impl ContractCallRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.block_number.to_string(),
            self.tx_hash.to_string(),
            encode_trace_address(&self.trace_address),
            self.call_type.as_str().to_string(),
            self.from.to_string(),
            self.to.to_string(),
            opt_cell(&self.selector),
            self.input_size.to_string(),
            self.value_wei.to_string(),
            self.gas_used.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<ContractCallRow, String> {
        let call_type = match req(rec, 3) {
            "call" => CallKind::Call,
            "delegatecall" => CallKind::DelegateCall,
            "staticcall" => CallKind::StaticCall,
            "callcode" => CallKind::CallCode,
            other => return Err(format!("unknown call type {other:?}")),
        };
        Ok(ContractCallRow {
            block_number: parse_cell(rec, 0, "block_number")?,
            tx_hash: parse_cell(rec, 1, "tx_hash")?,
            trace_address: decode_trace_address(req(rec, 2))?,
            call_type,
            from: parse_cell(rec, 4, "from")?,
            to: parse_cell(rec, 5, "to")?,
            selector: parse_opt(rec, 6, "selector")?,
            input_size: parse_cell(rec, 7, "input_size")?,
            value_wei: parse_cell(rec, 8, "value_wei")?,
            gas_used: parse_cell(rec, 9, "gas_used")?,
            error: opt_string(rec, 10),
        })
    }
}

/// Dataset 5a: ERC20 transfers, standard and non-standard shapes merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Erc20TransferRow {
    pub token: Address,
    pub from: Address,
    pub to: Address,
    pub value: Amount256,
    pub block_number: u64,
    pub tx_hash: Hash32,
    pub log_index: u32,
}

pub const ERC20_HEADER: [&str; 7] = ["token", "from", "to", "value", "block_number", "tx_hash", "log_index"];

impl Erc20TransferRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.token.to_string(),
            self.from.to_string(),
            self.to.to_string(),
            self.value.to_string(),
            self.block_number.to_string(),
            self.tx_hash.to_string(),
            self.log_index.to_string(),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<Erc20TransferRow, String> {
        Ok(Erc20TransferRow {
            token: parse_cell(rec, 0, "token")?,
            from: parse_cell(rec, 1, "from")?,
            to: parse_cell(rec, 2, "to")?,
            value: parse_cell(rec, 3, "value")?,
            block_number: parse_cell(rec, 4, "block_number")?,
            tx_hash: parse_cell(rec, 5, "tx_hash")?,
            log_index: parse_cell(rec, 6, "log_index")?,
        })
    }
}

/// Dataset 5b: per-token basic information; every field past the address
/// is best-effort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenMetadataRow {
    pub token: Address,
    pub name: Option<String>,
    pub symbol: Option<String>,
    pub decimals: Option<u32>,
    pub total_supply: Option<Amount256>,
}

pub const TOKENS_HEADER: [&str; 5] = ["token", "name", "symbol", "decimals", "total_supply"];

impl TokenMetadataRow {
    pub fn bare(token: Address) -> TokenMetadataRow {
        TokenMetadataRow { token, name: None, symbol: None, decimals: None, total_supply: None }
    }

    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.token.to_string(),
            self.name.clone().unwrap_or_default(),
            self.symbol.clone().unwrap_or_default(),
            opt_cell(&self.decimals),
            opt_cell(&self.total_supply),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<TokenMetadataRow, String> {
        Ok(TokenMetadataRow {
            token: parse_cell(rec, 0, "token")?,
            name: opt_string(rec, 1),
            symbol: opt_string(rec, 2),
            decimals: parse_opt(rec, 3, "decimals")?,
            total_supply: parse_opt(rec, 4, "total_supply")?,
        })
    }
}

/// Dataset 6: ERC721 transfers; the last column is a token id, not a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Erc721TransferRow {
    pub token: Address,
    pub from: Address,
    pub to: Address,
    pub token_id: Amount256,
    pub block_number: u64,
    pub tx_hash: Hash32,
    pub log_index: u32,
}

pub const ERC721_HEADER: [&str; 7] = ["token", "from", "to", "token_id", "block_number", "tx_hash", "log_index"];

impl Erc721TransferRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.token.to_string(),
            self.from.to_string(),
            self.to.to_string(),
            self.token_id.to_string(),
            self.block_number.to_string(),
            self.tx_hash.to_string(),
            self.log_index.to_string(),
        ]
    }

    pub fn from_record(rec: &[String]) -> Result<Erc721TransferRow, String> {
        Ok(Erc721TransferRow {
            token: parse_cell(rec, 0, "token")?,
            from: parse_cell(rec, 1, "from")?,
            to: parse_cell(rec, 2, "to")?,
            token_id: parse_cell(rec, 3, "token_id")?,
            block_number: parse_cell(rec, 4, "block_number")?,
            tx_hash: parse_cell(rec, 5, "tx_hash")?,
            log_index: parse_cell(rec, 6, "log_index")?,
        })
    }
}

pub(crate) fn record_error(file: &str, row: usize, reason: String) -> DatasetError {
    DatasetError::BadRecord { file: file.to_string(), row, reason }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_address_encoding() {
        assert_eq!(encode_trace_address(&[]), "");
        assert_eq!(encode_trace_address(&[0]), "0");
        assert_eq!(encode_trace_address(&[0, 2, 10]), "0.2.10");
        assert_eq!(decode_trace_address("").unwrap(), Vec::<u32>::new());
        assert_eq!(decode_trace_address("0.2.10").unwrap(), vec![0, 2, 10]);
        assert!(decode_trace_address("0..1").is_err());
    }

    #[test]
    fn tx_row_record_round_trip() {
        let row = TxRow {
            tx_hash: Hash32([1; 32]),
            block_number: 12,
            tx_index: 3,
            from: Address([2; 20]),
            to: None,
            value: Amount256::from(7u64),
            gas_price: Amount256::from(20_000_000_000u64),
            gas_used: 21_000,
            miner_reward: Amount256::from(420_000_000_000_000u64),
            input_size: 0,
            error: Some("Out of gas".to_string()),
        };
        let rec = row.to_record();
        assert_eq!(rec[4], "", "deployment renders an empty to-cell");
        assert_eq!(TxRow::from_record(&rec).unwrap(), row);
    }

    #[test]
    fn contract_row_unseen_creation_flag() {
        let row = ContractInfoRow {
            contract_address: Address([5; 20]),
            creator: None,
            creation_block: None,
            creation_tx_hash: None,
            initial_value: None,
            creation_code: None,
            deployed_code: None,
            deployed_code_size_bytes: None,
            deleted: true,
            deletion_block: Some(9),
            refund_address: Some(Address([6; 20])),
            refund_value: Some(Amount256::zero()),
            unseen_creation: true,
        };
        let rec = row.to_record();
        assert_eq!(rec[12], "unseen_creation");
        assert_eq!(ContractInfoRow::from_record(&rec).unwrap(), row);
    }
}
