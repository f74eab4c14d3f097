//! Statistics over the six datasets: scalar tables, fixed-interval time
//! series, histograms, selector rankings, and word frequencies, emitted as
//! a deterministic machine-readable report.

mod emit;
mod engine;
mod error;
mod report;
mod taxonomy;

pub use emit::{write_report, STATS_FILE};
pub use engine::{
    assemble_report, stats_blocks, stats_calls, stats_contracts, stats_ether, stats_miner_text, stats_throughput,
    stats_tokens, turnover_by_birth_block, StatsInputs, DEFAULT_TOP_N,
};
pub use error::StatsError;
pub use report::{
    BucketCount, RankedCount, SelectorCount, SeriesPoint, StatsReport, Table1, Table2, Table3, Table4, Table5, Table6,
};
pub use taxonomy::{
    code_size_bucket, code_size_bucket_label, ether_bucket, ether_bucket_label, ether_bucket_order, interval_start,
    normalize_error_label, rank_counts, EtherBucket, CODE_SIZE_BUCKET_BYTES, ETHER_DECADE_MAX, ETHER_DECADE_MIN,
    INTERVAL_BLOCKS, KNOWN_ERROR_LABELS,
};
