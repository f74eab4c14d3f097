//! Raw data acquisition: fetches blocks, receipts, and traces per height —
//! from a JSON-RPC endpoint or from the on-disk raw archive — and persists
//! them in the pipeline's segmented archive format.
//!
//! The queried range is assumed final; chain reorganizations during
//! extraction are out of scope. Re-exporting a range after the fact simply
//! skips complete heights.

mod archive;
mod bundle;
mod error;
mod export;
mod rpc;

pub use archive::{
    find_segment_file, read_file_bytes, read_raw, read_segment, segment_bounds, write_archive, write_segment,
    ArchiveReader, SEGMENT_SPAN,
};
pub use bundle::BlockBundle;
pub use error::IngestError;
pub use export::{export_raw, fetch_bundle, ExportOptions, SegmentReport};
pub use rpc::{RetryPolicy, RpcClient};
