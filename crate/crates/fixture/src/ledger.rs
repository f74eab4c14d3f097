use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use xbeth_core::{Address, Amount256};
use xbeth_stats::StatsReport;

use crate::spec::FixtureSpec;
use crate::FixtureError;

/// Basic information of one generated token contract, served over
/// `eth_call`. Absent fields stay absent on the wire (metadata-unavailable).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenInfo {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimals: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_supply: Option<Amount256>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRowCounts {
    pub dataset1_blocks: u64,
    pub dataset1_txs: u64,
    pub dataset2: u64,
    pub dataset3: u64,
    pub dataset4: u64,
    pub dataset5_transfers: u64,
    pub dataset5_tokens: u64,
    pub dataset6: u64,
}

/// Full expected contents of the datasets as CSV cell arrays, in final
/// sorted order. The cells are the contract: verification compares them
/// against the produced CSV text field by field.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRows {
    pub dataset1_blocks: Vec<Vec<String>>,
    pub dataset1_txs: Vec<Vec<String>>,
    pub dataset2: Vec<Vec<String>>,
    pub dataset3: Vec<Vec<String>>,
    pub dataset4: Vec<Vec<String>>,
    pub dataset5_transfers: Vec<Vec<String>>,
    pub dataset5_tokens: Vec<Vec<String>>,
    pub dataset6: Vec<Vec<String>>,
}

/// Ground-truth expectations emitted next to a generated archive. Every
/// downstream module is verified against this file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureLedger {
    pub spec: FixtureSpec,
    pub genesis_allocations: BTreeMap<Address, Amount256>,
    pub final_balances: BTreeMap<Address, Amount256>,
    pub token_metadata: BTreeMap<Address, TokenInfo>,
    pub expected_row_counts: ExpectedRowCounts,
    pub expected_rows: ExpectedRows,
    pub expected_stats: StatsReport,
}

impl FixtureLedger {
    pub fn file_name(seed: u64) -> String {
        format!("ledger-{seed}.json")
    }

    pub fn path_for(dir: &Path, seed: u64) -> PathBuf {
        dir.join(Self::file_name(seed))
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, FixtureError> {
        fs::create_dir_all(dir).map_err(|e| FixtureError::io(dir.display(), e))?;
        let path = Self::path_for(dir, self.spec.seed);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| FixtureError::io(path.display(), e))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<FixtureLedger, FixtureError> {
        let text = fs::read_to_string(path).map_err(|e| FixtureError::io(path.display(), e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
