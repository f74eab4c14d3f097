//! Deterministic synthetic chains with a ground-truth ledger.
//!
//! The generator scripts internally consistent blocks, traces, and
//! receipts, records the expected contents of every downstream dataset and
//! statistic while doing so, and can serve the result over the extraction
//! wire protocol. The ledger is the brute-force oracle the rest of the
//! pipeline is verified against.

mod gen;
mod ledger;
mod rng;
mod serve;
mod spec;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use gen::{generate, GeneratedFixture};
pub use ledger::{ExpectedRowCounts, ExpectedRows, FixtureLedger, TokenInfo};
pub use rng::{derive_address, derive_hash, tags, CounterRng};
pub use serve::FixtureServer;
pub use spec::{FixtureSpec, Scenario, ScenarioMix, SCENARIOS};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("invalid fixture spec: {0}")]
    BadSpec(String),

    #[error(transparent)]
    Ingest(#[from] xbeth_ingest::IngestError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serve failed: {0}")]
    Serve(String),
}

impl FixtureError {
    fn io(path: impl std::fmt::Display, source: std::io::Error) -> FixtureError {
        FixtureError::Io { path: path.to_string(), source }
    }
}

/// Outcome of `generate_and_write`.
#[derive(Debug)]
pub struct FixtureSummary {
    pub blocks: u64,
    pub transactions: u64,
    pub ledger_path: PathBuf,
}

/// Generates the chain for `spec` and persists both the raw archive and
/// the ledger into `dir`. The same spec always produces byte-identical
/// files.
pub fn generate_and_write(spec: &FixtureSpec, dir: &Path, gzip: bool) -> Result<FixtureSummary, FixtureError> {
    let fixture = generate(spec)?;
    let transactions = fixture.bundles.iter().map(|b| b.block.transactions.len() as u64).sum();
    let blocks = xbeth_ingest::write_archive(dir, fixture.bundles, gzip)?;
    let ledger_path = fixture.ledger.write(dir)?;
    Ok(FixtureSummary { blocks, transactions, ledger_path })
}

/// Starts a loopback endpoint over an on-disk fixture (archive + ledger).
pub fn serve_fixture(dir: &Path, seed: u64, port: u16) -> Result<FixtureServer, FixtureError> {
    let ledger = FixtureLedger::load(&FixtureLedger::path_for(dir, seed))?;
    let to = ledger.spec.n_blocks - 1;
    let bundles: Result<Vec<_>, _> = xbeth_ingest::read_raw(dir, 0, to)?.collect();
    FixtureServer::start(bundles?, ledger.token_metadata, port)
}
