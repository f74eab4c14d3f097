use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::archive::{existing_heights, segment_bounds, write_segment, SEGMENT_SPAN};
use crate::bundle::BlockBundle;
use crate::error::IngestError;
use crate::rpc::RpcClient;

#[derive(Debug, Clone, Copy)]
pub struct ExportOptions {
    pub gzip: bool,
    /// Concurrent height fetchers; the segment writer stays serialized.
    pub workers: usize,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions { gzip: false, workers: 8 }
    }
}

/// Per-segment outcome handed to the progress callback.
#[derive(Debug, Clone, Copy)]
pub struct SegmentReport {
    pub seg_from: u64,
    pub seg_to: u64,
    pub fetched: u64,
    pub skipped: u64,
}

/// Fetches block, receipts, and traces for one height and assembles the
/// validated bundle.
pub fn fetch_bundle(client: &RpcClient, height: u64) -> Result<BlockBundle, IngestError> {
    let block = client.fetch_block(height)?;
    let receipts = client.fetch_receipts(height)?;
    let traces = client.fetch_traces(height)?;
    BlockBundle::new(block, receipts, traces)
}

fn fetch_many(client: &RpcClient, heights: &[u64], workers: usize) -> Result<BTreeMap<u64, BlockBundle>, IngestError> {
    let cursor = AtomicUsize::new(0);
    let collected: Mutex<Vec<(u64, Result<BlockBundle, IngestError>)>> = Mutex::new(Vec::with_capacity(heights.len()));
    let worker_count = workers.clamp(1, heights.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..worker_count {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&height) = heights.get(index) else { break };
                let outcome = fetch_bundle(client, height);
                collected.lock().unwrap().push((height, outcome));
            });
        }
    });

    let mut results = collected.into_inner().unwrap();
    // deterministic error selection: report the lowest failing height
    results.sort_by_key(|(height, _)| *height);
    let mut bundles = BTreeMap::new();
    for (height, outcome) in results {
        bundles.insert(height, outcome?);
    }
    Ok(bundles)
}

/// Exports `[from, to]` into the raw archive, one complete bundle per
/// height. Heights already archived are skipped, so an interrupted run can
/// simply be re-run; a re-run over a complete range writes nothing.
/// Returns the number of newly fetched heights.
pub fn export_raw(
    client: &RpcClient,
    dir: &Path,
    from: u64,
    to: u64,
    opts: ExportOptions,
    mut on_segment: impl FnMut(SegmentReport),
) -> Result<u64, IngestError> {
    if from > to {
        return Err(IngestError::InvalidRange { from, to });
    }
    let mut total_fetched = 0u64;
    let mut seg_start = segment_bounds(from).0;
    while seg_start <= to {
        let (seg_from, seg_to) = segment_bounds(seg_start);
        let need_lo = seg_from.max(from);
        let need_hi = seg_to.min(to);

        let mut existing = existing_heights(dir, seg_from)?;
        let missing: Vec<u64> = (need_lo..=need_hi).filter(|h| !existing.contains_key(h)).collect();
        let skipped = (need_hi - need_lo + 1) - missing.len() as u64;

        if !missing.is_empty() {
            let fetched = fetch_many(client, &missing, opts.workers)?;
            existing.extend(fetched);
            write_segment(dir, seg_from, &existing, opts.gzip)?;
            total_fetched += missing.len() as u64;
        }
        on_segment(SegmentReport { seg_from, seg_to, fetched: missing.len() as u64, skipped });

        match seg_start.checked_add(SEGMENT_SPAN) {
            Some(next) => seg_start = next,
            None => break,
        }
    }
    Ok(total_fetched)
}
